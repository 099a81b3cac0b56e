#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "okm/dataset.hpp"
#include "okm/kmeans.hpp"
#include "okm/pipeline.hpp"
#include "okm/plot.hpp"
#include "okm/report.hpp"
#include "okm/univariate.hpp"

namespace okm::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes every file under a temporary name first; nothing is renamed into place unless all writes succeed.
void write_files(const std::vector<std::pair<std::string, std::string>>& files) {
    std::vector<std::string> temps;
    auto cleanup = [&] {
        for (const auto& t : temps) {
            std::error_code ec;
            std::filesystem::remove(t, ec);
        }
    };
    for (const auto& [path, content] : files) {
        const std::string tmp = path + ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            cleanup();
            throw Error("cannot open '" + path + "' for writing");
        }
        temps.push_back(tmp);
        out << content;
        out.close();
        if (!out) {
            cleanup();
            throw Error("failed writing '" + path + "'");
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        std::filesystem::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw Error("cannot move output into place at '" + files[i].first + "': " + ec.message());
        }
    }
}

/// The input text with the listed data records removed, all other bytes untouched.
std::string filter_records(const std::string& text, const RowSelection& removed) {
    if (removed.empty()) {
        return text;
    }
    std::string out;
    bool header_seen = false;
    std::size_t record = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        end = end == std::string::npos ? text.size() : end + 1;
        const std::string_view line(text.data() + start, end - start);
        const bool blank = line.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
        bool keep = true;
        if (!blank) {
            if (header_seen) {
                keep = !removed.contains(record);
                ++record;
            }
            header_seen = true;
        }
        if (keep) out.append(line);
        start = end;
    }
    return out;
}

void add_kmeans_options(CLI::App* sub, KMeansConfig& config, std::string& distance, bool& no_online) {
    sub->add_option("--k", config.k, "Number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--distance", distance, "sqeuclidean, cityblock, cosine, correlation or hamming")
        ->check(CLI::IsMember({"sqeuclidean", "squared_euclidean", "cityblock", "city_block", "cosine",
                               "correlation", "hamming"}))
        ->capture_default_str();
    sub->add_option("--replicates", config.replicates, "Independent restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iterations", config.max_iterations, "Batch-phase iteration limit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", config.seed, "Seed of replicate 0; replicate r uses seed + r")->capture_default_str();
    sub->add_flag("--no-online", no_online, "Skip the single-point refinement phase");
}

std::vector<std::string> or_all_columns(const std::vector<std::string>& columns, const Dataset& ds) {
    return columns.empty() ? ds.columns() : columns;
}

std::vector<std::size_t> read_assignments(const std::string& path) {
    const auto text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        const auto j = Json::parse(text);
        if (j.is_array()) return j.get<std::vector<std::size_t>>();
        if (j.contains("best")) return j.at("best").at("assignments").get<std::vector<std::size_t>>();
        return j.at("assignments").get<std::vector<std::size_t>>();
    }
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        long long v = -1;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || v < 0) {
            throw Error("malformed assignment '" + token + "' in '" + path + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

int cmd_describe(const std::string& input, const std::string& column, const std::string& format, std::ostream& out) {
    const auto ds = load_csv_file(input);
    const auto s = describe(ds, column);
    if (format == "json") {
        Json j = to_json(s);
        j["variable"] = column;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "Descriptive Statistics (" << column << ")\n"
        << "N Minimum Maximum Mean Std. Deviation\n"
        << s.n << ' ' << format_fixed(s.minimum, 2, true) << ' ' << format_fixed(s.maximum, 2, true) << ' '
        << format_fixed(s.mean, 4, true) << ' ' << format_fixed(s.std_dev, 5, true) << '\n';
    return kExitOk;
}

int cmd_detect(const std::string& input, const std::vector<std::string>& columns, std::optional<double> threshold,
               const std::string& sort, const std::string& format, std::ostream& out) {
    const auto ds = load_csv_file(input);
    const auto variables = or_all_columns(columns, ds);
    const auto report = flag_outliers(ds, variables, threshold);
    if (format == "json") {
        out << to_json(report).dump(2) << '\n';
        return kExitOk;
    }

    std::vector<std::vector<double>> z;
    for (const auto& v : variables) z.push_back(zscores(ds, v).scores);
    std::vector<std::size_t> order(ds.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (sort == "desc") {
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return z[0][a] > z[0][b]; });
    } else if (sort == "asc") {
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return z[0][a] < z[0][b]; });
    }

    out << "row";
    for (const auto& c : ds.columns()) out << ' ' << c;
    for (const auto& v : variables) out << " Z" << v;
    out << " flag\n";
    for (auto i : order) {
        out << i;
        for (std::size_t j = 0; j < ds.d(); ++j) out << ' ' << format_fixed(ds(i, j), 2);
        for (const auto& zv : z) out << ' ' << format_fixed(zv[i], 5);
        out << (report.union_rows.contains(i) ? " *" : " -") << '\n';
    }
    out << "criterion: |z| >= " << format_general(report.criterion.threshold) << " (n = " << report.criterion.sample_size
        << ")\n";
    out << "flagged rows:";
    if (report.union_rows.empty()) out << " none";
    for (auto i : report.union_rows.indices()) out << ' ' << i;
    out << '\n';
    return kExitOk;
}

int cmd_cluster(const std::string& input, const KMeansConfig& config, bool trace, const std::string& format,
                std::ostream& out) {
    const auto ds = load_csv_file(input);
    const auto result = kmeans(ds, config);
    if (format == "json") {
        Json j = to_json(result);
        j["config"] = to_json(config);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    render_trace(out, result, trace);
    return kExitOk;
}

int cmd_pipeline(const std::string& input, const PipelineConfig& config, const std::string& cleaned_path,
                 const std::string& report_path, std::ostream& out) {
    const auto text = read_file(input);
    const auto ds = load_csv_string(text);
    const auto decision = run_pipeline(ds, config);
    const auto report = make_pipeline_report(ds, config, decision);

    std::vector<std::pair<std::string, std::string>> files;
    if (!report_path.empty()) files.emplace_back(report_path, to_json(report).dump(2) + "\n");
    if (!cleaned_path.empty()) files.emplace_back(cleaned_path, filter_records(text, decision.removed));
    write_files(files);

    switch (decision.verdict) {
    case Verdict::no_outliers_detected:
        out << "no_outliers_detected\n";
        break;
    case Verdict::removed:
        out << "removed: " << decision.removed.size() << " tuple(s); sum " << format_fixed(*decision.sum_with, 2)
            << " -> " << format_fixed(*decision.sum_without, 2) << '\n';
        break;
    case Verdict::retained:
        out << "retained: " << decision.outliers.union_rows.size() << " tuple(s) kept; sum "
            << format_fixed(*decision.sum_with, 2) << " -> " << format_fixed(*decision.sum_without, 2) << '\n';
        break;
    }
    return kExitOk;
}

struct PlotArgs {
    std::string input;
    std::string output;
    std::vector<std::size_t> highlight;
    std::vector<std::string> detect_columns;
    std::optional<double> threshold;
    std::string assignments;
    bool cluster = false;
};

int cmd_plot(const PlotArgs& args, PlotSpec spec, const KMeansConfig& config, std::ostream& out) {
    const auto ds = load_csv_file(args.input);
    std::vector<std::size_t> highlight = args.highlight;
    if (!args.detect_columns.empty()) {
        const auto report = flag_outliers(ds, args.detect_columns, args.threshold);
        const auto& rows = report.union_rows.indices();
        highlight.insert(highlight.end(), rows.begin(), rows.end());
    }
    spec.highlight = RowSelection(std::move(highlight));
    if (!args.assignments.empty()) {
        spec.color_by = read_assignments(args.assignments);
    } else if (args.cluster) {
        spec.color_by = kmeans(ds, config).best.assignments;
    }
    write_files({{args.output, render_scatter_svg(ds, spec)}});
    out << "wrote " << args.output << " (" << ds.n() << " points, " << spec.highlight.size() << " highlighted)\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Univariate z-score outlier gate for k-means clustering", "okm"};
    app.require_subcommand(1);

    std::string input;
    std::string format = "table";
    std::vector<std::string> columns;
    std::optional<double> threshold;
    KMeansConfig kconfig;
    std::string distance{to_string(kconfig.measure)};
    bool no_online = false;

    auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics of one column");
    std::string column;
    describe_cmd->add_option("--input", input, "CSV file")->required();
    describe_cmd->add_option("--column", column, "Column name")->required();
    describe_cmd->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

    auto* detect_cmd = app.add_subcommand("detect", "Flag univariate z-score outliers");
    std::string sort = "desc";
    detect_cmd->add_option("--input", input, "CSV file")->required();
    detect_cmd->add_option("--columns", columns, "Columns to score (default: all)")->delimiter(',');
    detect_cmd->add_option("--threshold", threshold, "Override the sample-size threshold");
    detect_cmd->add_option("--sort", sort, "Order rows by the first column's z: desc, asc or none")
        ->check(CLI::IsMember({"desc", "asc", "none"}));
    detect_cmd->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

    auto* cluster_cmd = app.add_subcommand("cluster", "Best-of-replicates k-means");
    bool trace = false;
    std::string cluster_format = "text";
    cluster_cmd->add_option("--input", input, "CSV file")->required();
    add_kmeans_options(cluster_cmd, kconfig, distance, no_online);
    cluster_cmd->add_flag("--trace", trace, "Print the best replicate's iteration table");
    cluster_cmd->add_option("--format", cluster_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Flag, cluster with and without, remove if cheaper");
    std::string cleaned_path;
    std::string report_path;
    pipeline_cmd->add_option("--input", input, "CSV file")->required();
    pipeline_cmd->add_option("--columns", columns, "Columns to flag on (default: all)")->delimiter(',');
    pipeline_cmd->add_option("--threshold", threshold, "Override the sample-size threshold");
    add_kmeans_options(pipeline_cmd, kconfig, distance, no_online);
    pipeline_cmd->add_option("--cleaned", cleaned_path, "Where to write the cleaned CSV");
    pipeline_cmd->add_option("--report", report_path, "Where to write the JSON report");

    auto* plot_cmd = app.add_subcommand("plot", "SVG scatter plot of two columns");
    PlotArgs plot_args;
    PlotSpec spec;
    plot_cmd->add_option("--input", plot_args.input, "CSV file")->required();
    plot_cmd->add_option("--x", spec.x_variable, "Horizontal variable")->required();
    plot_cmd->add_option("--y", spec.y_variable, "Vertical variable")->required();
    plot_cmd->add_option("--output", plot_args.output, "SVG file to write")->required();
    plot_cmd->add_option("--highlight", plot_args.highlight, "Row indices to circle")->delimiter(',');
    plot_cmd->add_option("--detect-columns", plot_args.detect_columns, "Circle rows flagged on these columns")
        ->delimiter(',');
    plot_cmd->add_option("--threshold", plot_args.threshold, "Threshold override for --detect-columns");
    plot_cmd->add_option("--assignments", plot_args.assignments,
                         "Cluster ids: `cluster --format json` output or whitespace-separated integers");
    plot_cmd->add_flag("--cluster", plot_args.cluster, "Color by a fresh k-means run");
    add_kmeans_options(plot_cmd, kconfig, distance, no_online);
    plot_cmd->add_option("--width", spec.width, "Pixels")->capture_default_str();
    plot_cmd->add_option("--height", spec.height, "Pixels")->capture_default_str();
    plot_cmd->add_option("--title", spec.title, "Plot title");

    auto* fixture_cmd = app.add_subcommand("fixture", "Write the built-in Iris data as CSV");
    std::string fixture_out;
    bool plain = false;
    fixture_cmd->add_option("--output", fixture_out, "CSV file (default: standard output)");
    fixture_cmd->add_flag("--plain", plain, "Plain 150-row Iris without the injected tuple");

    std::vector<const char*> argv{"okm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitError;
    }

    try {
        kconfig.measure = parse_measure(distance);
        kconfig.online_phase = !no_online;
        if (describe_cmd->parsed()) return cmd_describe(input, column, format, out);
        if (detect_cmd->parsed()) return cmd_detect(input, columns, threshold, sort, format, out);
        if (cluster_cmd->parsed()) return cmd_cluster(input, kconfig, trace, cluster_format, out);
        if (pipeline_cmd->parsed()) {
            PipelineConfig pconfig;
            pconfig.variables = columns;
            pconfig.threshold_override = threshold;
            pconfig.kmeans = kconfig;
            return cmd_pipeline(input, pconfig, cleaned_path, report_path, out);
        }
        if (plot_cmd->parsed()) return cmd_plot(plot_args, spec, kconfig, out);
        if (fixture_cmd->parsed()) {
            const auto csv = to_csv_string(plain ? fisher_iris() : iris_outlier_fixture());
            if (fixture_out.empty()) {
                out << csv;
            } else {
                write_files({{fixture_out, csv}});
            }
            return kExitOk;
        }
    } catch (const ParseError& e) {
        err << "okm: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "okm: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace okm::cli
