#include <doctest.h>

#include <json.hpp>

#include "sms/errors.hpp"
#include "sms/report.hpp"

using namespace sms;

namespace {

TraceReport sample_trace() {
    TraceReport t;
    t.steps.push_back({0, "c1", 48.0, 36.0, 0.25, 1.5});
    t.steps.push_back({1, "c2", std::nullopt, 57.25, std::nullopt, 1.5000000001});
    t.steps.push_back({2, "c3", 3.141592653589793, 1e-7, 12345.678901234, 0.3333333333333333});
    t.ra = 0.875;
    return t;
}

ReportMeta sample_meta() {
    ReportMeta m;
    m.config_hash = "00d1b2a59fbe3c04";
    m.seeds = {1, 2, 3};
    return m;
}

}  // namespace

TEST_CASE("12-significant-digit float formatting") {
    CHECK(format_g12(0.1) == "0.1");
    CHECK(format_g12(1.0) == "1");
    CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
    CHECK(format_g12(1e-300) == "1e-300");
    CHECK(format_g12(-12345.6789) == "-12345.6789");
}

TEST_CASE("config hash is stable and content sensitive") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(hex64(fnv1a64("a")).size() == 16);
}

TEST_CASE("json writer escapes and orders") {
    JsonWriter w;
    w.begin_object();
    w.key("b").string("line\n\"quoted\"");
    w.key("a").integer(-3);
    w.key("list").begin_array().number(0.5).boolean(true).null().end_array();
    w.end_object();
    CHECK(w.str() == R"({"b":"line\n\"quoted\"","a":-3,"list":[0.5,true,null]})");
    // nlohmann can parse it back
    const auto j = nlohmann::json::parse(w.str());
    CHECK(j["b"] == "line\n\"quoted\"");
    CHECK(j["a"] == -3);
}

TEST_CASE("trace rendering") {
    const TraceReport trace = sample_trace();
    const ReportMeta meta = sample_meta();

    SUBCASE("json round-trips at 12 significant digits") {
        const std::string text = render_trace(trace, meta, ReportFormat::json);
        const auto j = nlohmann::json::parse(text);
        CHECK(j["artifact_version"] == kArtifactVersion);
        CHECK(j["config_hash"] == meta.config_hash);
        CHECK(j["T"] == 3);
        CHECK(format_g12(j["ra"].get<double>()) == format_g12(*trace.ra));
        REQUIRE(j["steps"].size() == 3);
        CHECK(j["steps"][1]["y"].is_null());
        for (std::size_t i : {std::size_t{0}, std::size_t{2}}) {
            CHECK(format_g12(j["steps"][i]["y"].get<double>()) ==
                  format_g12(*trace.steps[i].y));
            CHECK(format_g12(j["steps"][i]["rel_err"].get<double>()) ==
                  format_g12(*trace.steps[i].rel_err));
        }
        // re-rendering from the parsed values is byte-identical
        TraceReport reparsed = trace;
        for (std::size_t i = 0; i < reparsed.steps.size(); ++i) {
            if (reparsed.steps[i].y)
                reparsed.steps[i].y = j["steps"][i]["y"].get<double>();
            reparsed.steps[i].y_hat = j["steps"][i]["y_hat"].get<double>();
        }
        CHECK(render_trace(reparsed, meta, ReportFormat::json) == text);
    }

    SUBCASE("empty trace omits ra") {
        TraceReport empty;
        const std::string text = render_trace(empty, meta, ReportFormat::json);
        const auto j = nlohmann::json::parse(text);
        CHECK(j["T"] == 0);
        CHECK(!j.contains("ra"));
        CHECK(j["steps"].empty());
    }

    SUBCASE("csv carries the meta comment, header and blank missing fields") {
        const std::string text = render_trace(trace, meta, ReportFormat::csv);
        CHECK(text.find("# artifact_version=") == 0);
        CHECK(text.find("seeds=1;2;3") != std::string::npos);
        CHECK(text.find("step,case_id,y,y_hat,rel_err,theta_norm\n") != std::string::npos);
        CHECK(text.find("1,c2,,57.25,,") != std::string::npos);
    }

    SUBCASE("jsonl emits one object per step after the meta line") {
        const std::string text = render_trace(trace, meta, ReportFormat::jsonl);
        std::size_t lines = 0;
        for (char c : text) lines += c == '\n';
        CHECK(lines == 4);
        const auto head = nlohmann::json::parse(text.substr(0, text.find('\n')));
        CHECK(head["T"] == 3);
    }

    SUBCASE("rendering is deterministic") {
        CHECK(render_trace(trace, meta, ReportFormat::json) ==
              render_trace(trace, meta, ReportFormat::json));
        CHECK(render_trace(trace, meta, ReportFormat::csv) ==
              render_trace(trace, meta, ReportFormat::csv));
    }
}

TEST_CASE("summary rendering") {
    ExperimentSummary s;
    s.replications.push_back({11, 0.91, 0.90, 0.95, 0.9513});
    s.replications.push_back({12, 0.92, 0.91, 0.951, 0.9513});
    s.ra_mlms = {0.915, 0.00707};
    s.ra_plain = {0.905, 0.00707};
    s.ra_oracle = {0.9505, 0.000707};
    s.bound = {0.9513, 0.0};
    const std::string text = render_summary(s, sample_meta());
    const auto j = nlohmann::json::parse(text);
    CHECK(j["replications"] == 2);
    CHECK(j["per_seed"].size() == 2);
    CHECK(j["per_seed"][0]["seed"] == 11);
    CHECK(format_g12(j["ra_mlms"]["mean"].get<double>()) == "0.915");
    CHECK(format_g12(j["bound"]["mean"].get<double>()) == "0.9513");
}

TEST_CASE("report format parsing") {
    CHECK(report_format_from_string("json") == ReportFormat::json);
    CHECK(report_format_from_string("csv") == ReportFormat::csv);
    CHECK(report_format_from_string("jsonl") == ReportFormat::jsonl);
    CHECK_THROWS_AS(report_format_from_string("yaml"), ConfigError);
}
