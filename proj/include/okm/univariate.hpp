#ifndef OKM_UNIVARIATE_HPP
#define OKM_UNIVARIATE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okm/dataset.hpp"

namespace okm {

/// Five-number summary with the sample (N-1) standard deviation.
struct DescriptiveStats {
    std::size_t n = 0;
    double minimum = 0.0;
    double maximum = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
};

struct ZScoreReport {
    std::string variable;
    std::vector<double> scores; ///< one per row, row order preserved
    DescriptiveStats stats;
};

/// Small samples (80 or fewer cases) use |z| >= 2.5, larger ones |z| >= 3.0.
inline constexpr std::size_t kSmallSampleLimit = 80;
inline constexpr double kSmallSampleThreshold = 2.5;
inline constexpr double kLargeSampleThreshold = 3.0;

struct OutlierCriterion {
    double threshold = kLargeSampleThreshold;
    std::size_t sample_size = 0;
    bool inclusive = true;

    bool flags(double z) const noexcept { return z >= threshold || z <= -threshold; }
};

struct FlaggedValue {
    std::size_t row_index = 0;
    double value = 0.0;
    double zscore = 0.0;
};

struct VariableFlags {
    std::string variable;
    std::vector<FlaggedValue> flagged; ///< ascending row_index
};

struct OutlierReport {
    OutlierCriterion criterion;
    std::vector<VariableFlags> per_variable; ///< in the order variables were requested
    RowSelection union_rows;

    const VariableFlags* find(const std::string& variable) const;
};

DescriptiveStats describe(std::span<const double> values);
DescriptiveStats describe(const Dataset& ds, const std::string& variable);

/// Throws if the column has zero variance.
ZScoreReport zscores(const Dataset& ds, const std::string& variable);

OutlierCriterion outlier_threshold(std::size_t sample_size);

/**
 * @brief Flags every row whose |z| reaches the criterion in any listed variable.
 *
 * The criterion comes from outlier_threshold(ds.n()) unless `threshold_override`
 * is given. Per-variable scoring runs in parallel across columns.
 */
OutlierReport flag_outliers(const Dataset& ds, const std::vector<std::string>& variables,
                            std::optional<double> threshold_override = std::nullopt);

/// Serial reference for flag_outliers; same result, one column at a time.
OutlierReport flag_outliers_serial(const Dataset& ds, const std::vector<std::string>& variables,
                                   std::optional<double> threshold_override = std::nullopt);

} // namespace okm

#endif
