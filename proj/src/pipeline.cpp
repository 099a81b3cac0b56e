#include "okm/pipeline.hpp"

namespace okm {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::no_outliers_detected: return "no_outliers_detected";
    case Verdict::removed: return "removed";
    case Verdict::retained: return "retained";
    }
    return "unknown";
}

Verdict parse_verdict(std::string_view s) {
    if (s == "no_outliers_detected") return Verdict::no_outliers_detected;
    if (s == "removed") return Verdict::removed;
    if (s == "retained") return Verdict::retained;
    throw Error("unknown verdict '" + std::string(s) + "'");
}

PipelineDecision run_pipeline(const Dataset& ds, const PipelineConfig& config) {
    if (ds.n() < config.kmeans.k + 2) {
        throw Error("pipeline needs at least k + 2 = " + std::to_string(config.kmeans.k + 2) + " rows, got " +
                    std::to_string(ds.n()));
    }
    const auto& variables = config.variables.empty() ? ds.columns() : config.variables;
    auto outliers = flag_outliers(ds, variables, config.threshold_override);

    if (outliers.union_rows.empty()) {
        return {std::move(outliers), std::nullopt, std::nullopt, {}, Verdict::no_outliers_detected, ds};
    }

    const auto& flagged = outliers.union_rows;
    if (ds.n() - flagged.size() < config.kmeans.k) {
        throw Error("removing " + std::to_string(flagged.size()) + " flagged rows would leave fewer than k = " +
                    std::to_string(config.kmeans.k) + " rows");
    }
    Dataset without = drop_rows(ds, flagged);
    const double sum_with = kmeans(ds, config.kmeans).best.total_sum;
    const double sum_without = kmeans(without, config.kmeans).best.total_sum;

    if (sum_without < sum_with) {
        RowSelection removed = flagged;
        return {std::move(outliers), sum_with, sum_without, std::move(removed), Verdict::removed, std::move(without)};
    }
    return {std::move(outliers), sum_with, sum_without, {}, Verdict::retained, ds};
}

} // namespace okm
