#include "okm/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace okm {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> number_or_null(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

} // namespace

Json to_json(const OutlierCriterion& c) {
    return {{"threshold", c.threshold}, {"sample_size", c.sample_size}, {"inclusive", c.inclusive}};
}

Json to_json(const OutlierReport& r) {
    Json per_variable = Json::object();
    for (const auto& v : r.per_variable) {
        Json rows = Json::array();
        for (const auto& f : v.flagged) {
            rows.push_back({{"row_index", f.row_index}, {"value", f.value}, {"zscore", f.zscore}});
        }
        per_variable[v.variable] = std::move(rows);
    }
    return {{"criterion", to_json(r.criterion)},
            {"per_variable", std::move(per_variable)},
            {"union", r.union_rows.indices()}};
}

Json to_json(const DescriptiveStats& s) {
    return {{"n", s.n}, {"minimum", s.minimum}, {"maximum", s.maximum}, {"mean", s.mean}, {"std_dev", s.std_dev}};
}

OutlierReport outlier_report_from_json(const Json& j) {
    OutlierReport r;
    const auto& c = j.at("criterion");
    r.criterion.threshold = c.at("threshold").get<double>();
    r.criterion.sample_size = c.at("sample_size").get<std::size_t>();
    r.criterion.inclusive = c.at("inclusive").get<bool>();
    for (const auto& [name, rows] : j.at("per_variable").items()) {
        VariableFlags v;
        v.variable = name;
        for (const auto& f : rows) {
            v.flagged.push_back(
                {f.at("row_index").get<std::size_t>(), f.at("value").get<double>(), f.at("zscore").get<double>()});
        }
        r.per_variable.push_back(std::move(v));
    }
    r.union_rows = RowSelection(j.at("union").get<std::vector<std::size_t>>());
    return r;
}

bool operator==(const OutlierReport& a, const OutlierReport& b) {
    if (a.criterion.threshold != b.criterion.threshold || a.criterion.sample_size != b.criterion.sample_size ||
        a.criterion.inclusive != b.criterion.inclusive || !(a.union_rows == b.union_rows) ||
        a.per_variable.size() != b.per_variable.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.per_variable.size(); ++i) {
        const auto& va = a.per_variable[i];
        const auto& vb = b.per_variable[i];
        if (va.variable != vb.variable || va.flagged.size() != vb.flagged.size()) return false;
        for (std::size_t k = 0; k < va.flagged.size(); ++k) {
            const auto& fa = va.flagged[k];
            const auto& fb = vb.flagged[k];
            if (fa.row_index != fb.row_index || fa.value != fb.value || fa.zscore != fb.zscore) return false;
        }
    }
    return true;
}

Json to_json(const KMeansConfig& c) {
    return {{"k", c.k},
            {"distance", std::string(to_string(c.measure))},
            {"replicates", c.replicates},
            {"max_iterations", c.max_iterations},
            {"seed", c.seed},
            {"online_phase", c.online_phase}};
}

KMeansConfig kmeans_config_from_json(const Json& j) {
    KMeansConfig c;
    c.k = j.at("k").get<std::size_t>();
    c.measure = parse_measure(j.at("distance").get<std::string>());
    c.replicates = j.at("replicates").get<std::size_t>();
    c.max_iterations = j.at("max_iterations").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.online_phase = j.at("online_phase").get<bool>();
    return c;
}

Json to_json(const ReplicateResult& r) {
    Json centroids = Json::array();
    for (std::size_t c = 0; c < r.centroids.rows(); ++c) {
        auto row = r.centroids.row(c);
        centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    Json trace = Json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"iter", t.iter}, {"phase", static_cast<int>(t.phase)}, {"num", t.num}, {"sum", t.sum}});
    }
    return {{"total_sum", r.total_sum},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"seed_used", r.seed_used},
            {"assignments", r.assignments},
            {"centroids", std::move(centroids)},
            {"trace", std::move(trace)}};
}

Json to_json(const KMeansResult& r) {
    return {{"best_sum", r.best.total_sum},
            {"best_replicate", r.best_replicate},
            {"all_sums", r.all_sums},
            {"all_iterations", r.all_iterations},
            {"best", to_json(r.best)}};
}

KMeansResult kmeans_result_from_json(const Json& j) {
    KMeansResult r;
    r.best_replicate = j.at("best_replicate").get<std::size_t>();
    r.all_sums = j.at("all_sums").get<std::vector<double>>();
    r.all_iterations = j.at("all_iterations").get<std::vector<std::size_t>>();
    const auto& b = j.at("best");
    r.best.total_sum = b.at("total_sum").get<double>();
    r.best.iterations = b.at("iterations").get<std::size_t>();
    r.best.converged = b.at("converged").get<bool>();
    r.best.seed_used = b.at("seed_used").get<std::uint64_t>();
    r.best.assignments = b.at("assignments").get<std::vector<std::size_t>>();
    const auto rows = b.at("centroids").get<std::vector<std::vector<double>>>();
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    std::vector<double> flat;
    for (const auto& row : rows) {
        if (row.size() != d) throw Error("ragged centroid matrix in JSON");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    r.best.centroids = Matrix(rows.size(), d, std::move(flat));
    for (const auto& t : b.at("trace")) {
        const int phase = t.at("phase").get<int>();
        if (phase != 1 && phase != 2) throw Error("trace phase must be 1 or 2");
        r.best.trace.push_back({t.at("iter").get<std::size_t>(), static_cast<Phase>(phase),
                                t.at("num").get<std::size_t>(), t.at("sum").get<double>()});
    }
    return r;
}

bool PipelineReport::operator==(const PipelineReport& o) const {
    return verdict == o.verdict && sum_with == o.sum_with && sum_without == o.sum_without && removed == o.removed &&
           outliers == o.outliers && variables == o.variables && threshold_override == o.threshold_override &&
           kmeans == o.kmeans && rows_in == o.rows_in && rows_out == o.rows_out;
}

PipelineReport make_pipeline_report(const Dataset& input, const PipelineConfig& config,
                                    const PipelineDecision& decision) {
    PipelineReport r;
    r.verdict = decision.verdict;
    r.sum_with = decision.sum_with;
    r.sum_without = decision.sum_without;
    r.removed = decision.removed;
    r.outliers = decision.outliers;
    r.variables = config.variables.empty() ? input.columns() : config.variables;
    r.threshold_override = config.threshold_override;
    r.kmeans = config.kmeans;
    r.rows_in = input.n();
    r.rows_out = decision.cleaned.n();
    return r;
}

Json to_json(const PipelineReport& r) {
    return {{"verdict", std::string(to_string(r.verdict))},
            {"sum_with", optional_number(r.sum_with)},
            {"sum_without", optional_number(r.sum_without)},
            {"removed", r.removed.indices()},
            {"rows_in", r.rows_in},
            {"rows_out", r.rows_out},
            {"variables", r.variables},
            {"threshold_override", optional_number(r.threshold_override)},
            {"kmeans", to_json(r.kmeans)},
            {"outliers", to_json(r.outliers)}};
}

PipelineReport pipeline_report_from_json(const Json& j) {
    PipelineReport r;
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.sum_with = number_or_null(j.at("sum_with"));
    r.sum_without = number_or_null(j.at("sum_without"));
    r.removed = RowSelection(j.at("removed").get<std::vector<std::size_t>>());
    r.rows_in = j.at("rows_in").get<std::size_t>();
    r.rows_out = j.at("rows_out").get<std::size_t>();
    r.variables = j.at("variables").get<std::vector<std::string>>();
    r.threshold_override = number_or_null(j.at("threshold_override"));
    r.kmeans = kmeans_config_from_json(j.at("kmeans"));
    r.outliers = outlier_report_from_json(j.at("outliers"));
    return r;
}

std::string format_fixed(double x, int decimals, bool drop_leading_zero) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (s == "-0" || (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos)) {
        s.erase(0, 1);
    }
    if (drop_leading_zero) {
        if (s.rfind("0.", 0) == 0) {
            s.erase(0, 1);
        } else if (s.rfind("-0.", 0) == 0) {
            s.erase(1, 1);
        }
    }
    return s;
}

std::string format_general(double x, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, x);
    return buf;
}

void render_trace(std::ostream& out, const KMeansResult& result, bool with_table) {
    if (with_table) {
        char line[128];
        std::snprintf(line, sizeof line, "%6s %6s %7s %12s\n", "iter", "phase", "num", "sum");
        out << line;
        for (const auto& t : result.best.trace) {
            std::snprintf(line, sizeof line, "%6zu %6d %7zu %12s\n", t.iter, static_cast<int>(t.phase), t.num,
                          format_general(t.sum).c_str());
            out << line;
        }
    }
    for (std::size_t r = 0; r < result.all_sums.size(); ++r) {
        out << result.all_iterations[r] << " iterations, total sum of distances = "
            << format_general(result.all_sums[r]) << '\n';
    }
    out << "ans =\n" << format_fixed(result.best.total_sum, 4) << '\n';
}

std::optional<double> parse_trace_answer(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("ans =", 0) == 0) {
            std::string value;
            while (std::getline(in, value)) {
                if (value.find_first_not_of(" \t\r") == std::string::npos) continue;
                try {
                    return std::stod(value);
                } catch (const std::exception&) {
                    return std::nullopt;
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace okm
