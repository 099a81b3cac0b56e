#ifndef OKM_PIPELINE_HPP
#define OKM_PIPELINE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "okm/dataset.hpp"
#include "okm/kmeans.hpp"
#include "okm/univariate.hpp"

namespace okm {

struct PipelineConfig {
    std::vector<std::string> variables; ///< empty means every column
    std::optional<double> threshold_override;
    KMeansConfig kmeans;
};

enum class Verdict { no_outliers_detected, removed, retained };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

struct PipelineDecision {
    OutlierReport outliers;
    std::optional<double> sum_with;
    std::optional<double> sum_without;
    RowSelection removed;
    Verdict verdict = Verdict::no_outliers_detected;
    Dataset cleaned;
};

/**
 * @brief Flag, cluster with and without the flagged rows, and keep the cheaper dataset.
 *
 * Flags use the criterion of the full dataset's size. When nothing is flagged
 * no clustering runs. Otherwise both datasets are clustered with the same
 * KMeansConfig (seed included); the flagged rows are dropped only when the
 * best sum without them is strictly smaller.
 */
PipelineDecision run_pipeline(const Dataset& ds, const PipelineConfig& config);

} // namespace okm

#endif
