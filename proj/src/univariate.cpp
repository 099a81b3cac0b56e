#include "okm/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace okm {

const VariableFlags* OutlierReport::find(const std::string& variable) const {
    for (const auto& v : per_variable) {
        if (v.variable == variable) {
            return &v;
        }
    }
    return nullptr;
}

DescriptiveStats describe(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error("standard deviation needs at least 2 values, got " + std::to_string(values.size()));
    }
    DescriptiveStats s;
    s.n = values.size();
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.minimum = *lo;
    s.maximum = *hi;

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    // Rounding can push the mean a hair outside [min, max] for constant data.
    s.mean = std::clamp(s.mean, s.minimum, s.maximum);

    if (s.minimum == s.maximum) {
        s.std_dev = 0.0;
        return s;
    }
    double ss = 0.0;
    for (double v : values) {
        const double dv = v - s.mean;
        ss += dv * dv;
    }
    s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
    return s;
}

DescriptiveStats describe(const Dataset& ds, const std::string& variable) {
    const auto values = ds.column(variable);
    return describe(values);
}

ZScoreReport zscores(const Dataset& ds, const std::string& variable) {
    ZScoreReport report;
    report.variable = variable;
    const auto values = ds.column(variable);
    report.stats = describe(values);
    if (report.stats.std_dev == 0.0) {
        throw Error("column '" + variable + "' has zero variance and cannot be standardized");
    }
    report.scores.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        report.scores[i] = (values[i] - report.stats.mean) / report.stats.std_dev;
    }
    return report;
}

OutlierCriterion outlier_threshold(std::size_t sample_size) {
    if (sample_size == 0) {
        throw Error("sample size must be at least 1");
    }
    OutlierCriterion c;
    c.sample_size = sample_size;
    c.threshold = sample_size <= kSmallSampleLimit ? kSmallSampleThreshold : kLargeSampleThreshold;
    return c;
}

namespace {

OutlierCriterion make_criterion(const Dataset& ds, const std::vector<std::string>& variables,
                                std::optional<double> threshold_override) {
    if (variables.empty()) {
        throw Error("no variables selected for outlier flagging");
    }
    for (const auto& v : variables) {
        ds.column_index(v);
    }
    auto criterion = outlier_threshold(ds.n());
    if (threshold_override) {
        if (!std::isfinite(*threshold_override) || *threshold_override <= 0.0) {
            throw Error("threshold override must be a positive finite number");
        }
        criterion.threshold = *threshold_override;
    }
    return criterion;
}

VariableFlags flag_variable(const Dataset& ds, const std::string& variable, const OutlierCriterion& criterion) {
    const auto z = zscores(ds, variable);
    const auto j = ds.column_index(variable);
    VariableFlags out;
    out.variable = variable;
    for (std::size_t i = 0; i < z.scores.size(); ++i) {
        if (criterion.flags(z.scores[i])) {
            out.flagged.push_back({i, ds(i, j), z.scores[i]});
        }
    }
    return out;
}

OutlierReport assemble(OutlierCriterion criterion, std::vector<VariableFlags> per_variable) {
    OutlierReport report;
    report.criterion = criterion;
    std::vector<std::size_t> all;
    for (const auto& v : per_variable) {
        for (const auto& f : v.flagged) all.push_back(f.row_index);
    }
    report.per_variable = std::move(per_variable);
    report.union_rows = RowSelection(std::move(all));
    return report;
}

} // namespace

OutlierReport flag_outliers(const Dataset& ds, const std::vector<std::string>& variables,
                            std::optional<double> threshold_override) {
    const auto criterion = make_criterion(ds, variables, threshold_override);
    const auto count = static_cast<long>(variables.size());
    std::vector<VariableFlags> per_variable(variables.size());
    std::vector<std::exception_ptr> errors(variables.size());

#pragma omp parallel for schedule(static)
    for (long v = 0; v < count; ++v) {
        try {
            per_variable[v] = flag_variable(ds, variables[v], criterion);
        } catch (...) {
            errors[v] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return assemble(criterion, std::move(per_variable));
}

OutlierReport flag_outliers_serial(const Dataset& ds, const std::vector<std::string>& variables,
                                   std::optional<double> threshold_override) {
    const auto criterion = make_criterion(ds, variables, threshold_override);
    std::vector<VariableFlags> per_variable;
    for (const auto& v : variables) {
        per_variable.push_back(flag_variable(ds, v, criterion));
    }
    return assemble(criterion, std::move(per_variable));
}

} // namespace okm
