#include "doctest.h"

#include <regex>
#include <sstream>

#include "okm/report.hpp"

using namespace okm;

TEST_CASE("format helpers") {
    CHECK(format_fixed(0.891934, 5, true) == ".89193");
    CHECK(format_fixed(-0.5, 2, true) == "-.50");
    CHECK(format_fixed(5.87086, 4) == "5.8709");
    CHECK(format_fixed(10.0, 2, true) == "10.00");
    CHECK(format_fixed(0.25, 2) == "0.25");
    CHECK(format_general(116.129532) == "116.13");
    CHECK(format_general(217.0139999) == "217.014");
}

TEST_CASE("k-means results survive a JSON round trip") {
    KMeansConfig cfg;
    cfg.replicates = 4;
    cfg.seed = 0xFFFFFFFFFFFFFFFFULL - 2;
    cfg.measure = DistanceMeasure::city_block;
    const auto r = kmeans(fisher_iris(), cfg);
    const auto text = to_json(r).dump();
    CHECK(kmeans_result_from_json(Json::parse(text)) == r);
    CHECK(kmeans_config_from_json(to_json(cfg)) == cfg);
}

TEST_CASE("outlier reports and pipeline reports survive a JSON round trip") {
    const auto fx = iris_outlier_fixture();
    const auto outliers = flag_outliers(fx, fx.columns(), 2.0);
    CHECK(outlier_report_from_json(Json::parse(to_json(outliers).dump())) == outliers);

    PipelineConfig pc;
    pc.variables = {"SL"};
    const auto decision = run_pipeline(fx, pc);
    const auto report = make_pipeline_report(fx, pc, decision);
    CHECK(report.rows_in == 151);
    CHECK(report.rows_out == 150);
    CHECK(report.verdict == Verdict::removed);
    const auto j = to_json(report);
    CHECK(j["verdict"] == "removed");
    CHECK(j["removed"] == Json::array({0}));
    CHECK(pipeline_report_from_json(Json::parse(j.dump())) == report);

    PipelineConfig quiet;
    quiet.variables = {"PL"};
    const auto none = make_pipeline_report(fisher_iris(), quiet, run_pipeline(fisher_iris(), quiet));
    const auto jn = to_json(none);
    CHECK(jn["sum_with"].is_null());
    CHECK(jn["verdict"] == "no_outliers_detected");
    CHECK(pipeline_report_from_json(jn) == none);
}

TEST_CASE("malformed JSON is rejected") {
    CHECK_THROWS(kmeans_result_from_json(Json::parse(R"({"best": 3})")));
    CHECK_THROWS(pipeline_report_from_json(Json::parse(R"({"verdict": "maybe"})")));
}

TEST_CASE("trace rendering") {
    const auto r = kmeans(iris_outlier_fixture(), KMeansConfig{});
    std::ostringstream out;
    render_trace(out, r);
    const auto text = out.str();
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "  iter  phase     num          sum");

    const std::regex row(R"(^\s*\d+\s+[12]\s+\d+\s+[0-9.e+]+$)");
    const std::regex summary(R"(^\d+ iterations, total sum of distances = [0-9.e+]+$)");
    std::size_t rows = 0, summaries = 0;
    while (std::getline(lines, line) && line != "ans =") {
        if (std::regex_match(line, row)) ++rows;
        else if (std::regex_match(line, summary)) ++summaries;
        else FAIL("unexpected line: " << line);
    }
    CHECK(rows == r.best.trace.size());
    CHECK(summaries == 11);
    std::getline(lines, line);
    CHECK(line == format_fixed(r.best.total_sum, 4));
    REQUIRE(parse_trace_answer(text).has_value());
    CHECK(std::abs(*parse_trace_answer(text) - r.best.total_sum) < 5e-5);

    std::ostringstream brief;
    render_trace(brief, r, false);
    CHECK(brief.str().find(" iterations, total sum of distances = ") < brief.str().find('\n'));
    CHECK(brief.str().find("iter  phase") == std::string::npos);
}

TEST_CASE("parse_trace_answer") {
    CHECK(parse_trace_answer("ans =\n\n  116.1295\n") == 116.1295);
    CHECK_FALSE(parse_trace_answer("no answer here").has_value());
    CHECK_FALSE(parse_trace_answer("ans =\nxyz\n").has_value());
}
