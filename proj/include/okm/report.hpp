#ifndef OKM_REPORT_HPP
#define OKM_REPORT_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "okm/kmeans.hpp"
#include "okm/pipeline.hpp"
#include "okm/univariate.hpp"

namespace okm {

using Json = nlohmann::ordered_json;

Json to_json(const OutlierCriterion& c);
Json to_json(const OutlierReport& r);
Json to_json(const KMeansConfig& c);
Json to_json(const ReplicateResult& r);
Json to_json(const KMeansResult& r);
Json to_json(const DescriptiveStats& s);

OutlierReport outlier_report_from_json(const Json& j);
KMeansConfig kmeans_config_from_json(const Json& j);
KMeansResult kmeans_result_from_json(const Json& j);

/// What the pipeline JSON report carries; the cleaned rows go to CSV instead.
struct PipelineReport {
    Verdict verdict = Verdict::no_outliers_detected;
    std::optional<double> sum_with;
    std::optional<double> sum_without;
    RowSelection removed;
    OutlierReport outliers;
    std::vector<std::string> variables;
    std::optional<double> threshold_override;
    KMeansConfig kmeans;
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;

    bool operator==(const PipelineReport&) const;
};

PipelineReport make_pipeline_report(const Dataset& input, const PipelineConfig& config,
                                    const PipelineDecision& decision);
Json to_json(const PipelineReport& r);
PipelineReport pipeline_report_from_json(const Json& j);

bool operator==(const OutlierReport& a, const OutlierReport& b);

/// Fixed decimals; optionally drops the leading zero of |x| < 1 (".89193").
std::string format_fixed(double x, int decimals, bool drop_leading_zero = false);
/// printf %g with `significant` digits.
std::string format_general(double x, int significant = 6);

/**
 * Iteration table of the best replicate, one summary line per replicate and
 * the best sum:
 *
 *     iter  phase     num          sum
 *        1      1     151      217.014
 *     ...
 *     6 iterations, total sum of distances = 116.13
 *     ans =
 *     116.1295
 */
void render_trace(std::ostream& out, const KMeansResult& result, bool with_table = true);

/// Parses the value following the `ans =` line of render_trace output.
std::optional<double> parse_trace_answer(const std::string& text);

} // namespace okm

#endif
