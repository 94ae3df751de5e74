#include "doctest.h"

#include <string>
#include <variant>
#include <vector>

#include "rafu/config.hpp"
#include "test_util.hpp"

using rafu::EvalStrategy;
using rafu::ScheduleKind;
using rafu::StudyConfig;
using rafu::ValidationError;

namespace {

const char* kCdfFixed0 =
    R"({"statistic": "cdf", "epistemic": {"kind": "fixed", "alpha": 0.0}, "confidence": "none"})";

std::string config_dir() { return RAFU_CONFIG_DIR; }

std::string error_of(const std::string& json_text) {
    try {
        rafu::parse_config(json_text);
        return "";
    } catch (const ValidationError& e) {
        return e.what();
    }
}

} // namespace

TEST_CASE("a minimal config parses with defaults") {
    const auto cfg = rafu::parse_config(test_util::desk_config_json(kCdfFixed0));
    CHECK(cfg.parameters.size() == 2);
    CHECK(cfg.aleatory_count() == 1);
    CHECK(cfg.epistemic_count() == 1);
    CHECK(cfg.parameters[0].name == "x1");
    CHECK(cfg.parameters[0].is_aleatory());
    CHECK(cfg.parameters[1].name == "e1");
    CHECK(!cfg.parameters[1].is_aleatory());
    CHECK(cfg.model_text == "x1 + e1");
    CHECK(!cfg.sample_size.has_value());
    CHECK(cfg.epistemic_eval == EvalStrategy::Vertex);
    CHECK(cfg.vertex_limit == 12);
    CHECK(cfg.seed == 42);
    CHECK(!cfg.correlation.has_value());
    CHECK(!cfg.triplet.quantile.has_value());
    CHECK(!cfg.triplet.confidence.has_value());
}

TEST_CASE("optional keys are honored") {
    const auto cfg = rafu::parse_config(test_util::desk_config_json(
        kCdfFixed0, "\"sample_size\": 77, \"epistemic_eval\": \"interval\", "
                    "\"vertex_limit\": 3"));
    CHECK(cfg.sample_size == std::size_t{77});
    CHECK(cfg.epistemic_eval == EvalStrategy::IntervalArith);
    CHECK(cfg.vertex_limit == 3);
}

TEST_CASE("the digest tracks content, not formatting or seed") {
    const std::string canonical = test_util::desk_config_json(kCdfFixed0);
    const std::string reordered = std::string("{") +
        "\"seed\": 42, " +
        "\"triplet\": " + kCdfFixed0 + ", " +
        "\"model\": \"x1 + e1\", " +
        "\"parameters\": [" +
        R"({"dist": {"hi": 1.0, "lo": 0.0, "kind": "uniform"}, "kind": "aleatory", "name": "x1"},)" +
        R"({"dist": {"b": 2.0, "a": 0.0, "core": 1.0, "kind": "triangular"}, "kind": "epistemic", "name": "e1"})" +
        "]}";
    const auto a = rafu::parse_config(canonical);
    const auto b = rafu::parse_config(reordered);
    CHECK(a.digest == b.digest);

    // the seed is deliberately outside the fingerprint
    std::string reseeded = canonical;
    const auto pos = reseeded.find("\"seed\": 42");
    REQUIRE(pos != std::string::npos);
    reseeded.replace(pos, 10, "\"seed\": 77");
    CHECK(rafu::parse_config(reseeded).digest == a.digest);
    CHECK(rafu::parse_config(reseeded).seed == 77);

    // any other change lands in it
    std::string other_model = canonical;
    const auto mpos = other_model.find("x1 + e1");
    other_model.replace(mpos, 7, "x1 - e1");
    CHECK(rafu::parse_config(other_model).digest != a.digest);
    const auto sized = rafu::parse_config(
        test_util::desk_config_json(kCdfFixed0, "\"sample_size\": 100"));
    CHECK(sized.digest != a.digest);
}

TEST_CASE("malformed json is reported with the parser's context") {
    const std::string err = error_of("{\"parameters\": [,]}");
    CHECK(err.find("config parse error") != std::string::npos);
    CHECK(error_of("[]").find("root must be a JSON object") != std::string::npos);
}

TEST_CASE("missing required keys are itemized") {
    const std::string err = error_of("{}");
    CHECK(err.find("\"parameters\"") != std::string::npos);
    CHECK(err.find("\"model\"") != std::string::npos);
    CHECK(err.find("\"triplet\"") != std::string::npos);
    CHECK(err.find("\"seed\"") != std::string::npos);
}

TEST_CASE("unknown keys are rejected everywhere") {
    std::string with_extra = test_util::desk_config_json(kCdfFixed0, "\"extras\": 1");
    CHECK(error_of(with_extra).find("\"extras\"") != std::string::npos);

    const std::string bad_dist = test_util::desk_config_json(kCdfFixed0);
    std::string tweaked = bad_dist;
    const auto pos = tweaked.find("\"hi\": 1.0");
    tweaked.replace(pos, 9, "\"high\": 1.0");
    const std::string err = error_of(tweaked);
    CHECK(err.find("parameter 1") != std::string::npos);
    CHECK(err.find("\"high\"") != std::string::npos);
}

TEST_CASE("parameter problems carry their position") {
    auto with_params = [](const std::string& params) {
        return "{\"parameters\": [" + params +
               "], \"model\": \"1 + 0\", \"triplet\": " + std::string(kCdfFixed0) +
               ", \"sample_size\": 10, \"seed\": 1}";
    };
    CHECK(error_of(with_params(
                       R"({"name": "x1", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 1.0, "hi": 1.0}})"))
              .find("parameter 1: uniform: need lo < hi") != std::string::npos);
    CHECK(error_of(with_params(
                       R"({"name": "9lives", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})"))
              .find("not a valid identifier") != std::string::npos);
    CHECK(error_of(with_params(
                       R"({"name": "sqrt", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})"))
              .find("collides with a built-in function") != std::string::npos);
    CHECK(error_of(with_params(
                       R"({"name": "x1", "kind": "random", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})"))
              .find("kind must be \"aleatory\" or \"epistemic\"") != std::string::npos);
    CHECK(error_of(with_params(
                       R"({"name": "x1", "kind": "aleatory", "dist": {"kind": "gamma", "lo": 0.0, "hi": 1.0}})"))
              .find("unknown aleatory dist kind \"gamma\"") != std::string::npos);
    CHECK(error_of(with_params(
                       R"({"name": "e1", "kind": "epistemic", "dist": {"kind": "pert", "a": 0.0, "b": 1.0}})"))
              .find("unknown epistemic dist kind \"pert\"") != std::string::npos);
    const std::string dup = with_params(
        R"({"name": "x1", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}},
            {"name": "x1", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})");
    CHECK(error_of(dup).find("duplicate parameter name \"x1\"") != std::string::npos);
    CHECK(error_of("{\"parameters\": [], \"model\": \"1\", \"triplet\": " +
                   std::string(kCdfFixed0) + ", \"seed\": 1}")
              .find("non-empty array") != std::string::npos);
}

TEST_CASE("nested interval cuts are validated") {
    auto with_cuts = [](const std::string& cuts) {
        return "{\"parameters\": [{\"name\": \"e1\", \"kind\": \"epistemic\", "
               "\"dist\": {\"kind\": \"nested_intervals\", \"cuts\": [" +
               cuts + "]}}], \"model\": \"e1\", \"triplet\": " +
               std::string(kCdfFixed0) + ", \"sample_size\": 5, \"seed\": 1}";
    };
    CHECK_NOTHROW(rafu::parse_config(with_cuts(
        R"({"lo": 0.0, "hi": 3.0, "confidence": 0.9}, {"lo": 1.0, "hi": 2.0, "confidence": 0.5})")));
    // not nested
    CHECK(error_of(with_cuts(
              R"({"lo": 0.0, "hi": 1.0, "confidence": 0.9}, {"lo": 0.5, "hi": 2.0, "confidence": 0.5})"))
              .find("parameter 1") != std::string::npos);
    // unknown cut key
    CHECK(error_of(with_cuts(R"({"lo": 0.0, "hi": 1.0, "conf": 0.9})"))
              .find("\"conf\"") != std::string::npos);
}

TEST_CASE("cross checks run only when the pieces parse") {
    const std::string undeclared = "{\"parameters\": [" +
        std::string(
            R"({"name": "x1", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})") +
        "], \"model\": \"x9 + x1 + also\", \"triplet\": " + kCdfFixed0 +
        ", \"sample_size\": 10, \"seed\": 1}";
    const std::string err = error_of(undeclared);
    CHECK(err.find("undeclared parameter(s): also, x9") != std::string::npos);

    const std::string mismatched = test_util::desk_config_json(
        kCdfFixed0,
        "\"sample_size\": 10, \"correlation\": {\"spearman\": [[1.0, 0.0, 0.0], "
        "[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]}");
    CHECK(error_of(mismatched).find("3x3 but there are 1 aleatory") != std::string::npos);
}

TEST_CASE("vertex budget is checked against the epistemic count") {
    std::string params =
        R"({"name": "x1", "kind": "aleatory", "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0}})";
    std::string model = "x1";
    for (int i = 0; i < 13; ++i) {
        params += ", {\"name\": \"e" + std::to_string(i) +
                  "\", \"kind\": \"epistemic\", \"dist\": {\"kind\": \"rectangular\", "
                  "\"lo\": 0.0, \"hi\": 1.0}}";
        model += " + e" + std::to_string(i);
    }
    const std::string base = "{\"parameters\": [" + params + "], \"model\": \"" + model +
                             "\", \"triplet\": " + std::string(kCdfFixed0) +
                             ", \"sample_size\": 5, \"seed\": 1";
    CHECK(error_of(base + "}").find("exceeds vertex_limit 12") != std::string::npos);
    CHECK_NOTHROW(rafu::parse_config(base + ", \"epistemic_eval\": \"interval\"}"));
    CHECK_NOTHROW(rafu::parse_config(base + ", \"vertex_limit\": 13}"));
}

TEST_CASE("triplet parsing rejects out-of-range pieces") {
    auto with_triplet = [](const std::string& triplet) {
        return test_util::desk_config_json(triplet, "\"sample_size\": 10");
    };
    CHECK(error_of(with_triplet(
              R"({"statistic": "median", "epistemic": {"kind": "fixed", "alpha": 0.0}, "confidence": "none"})"))
              .find("quantile level in (0,1) or \"cdf\"") != std::string::npos);
    CHECK(error_of(with_triplet(
              R"({"statistic": "cdf", "epistemic": {"kind": "fixed", "alpha": 0.0}, "confidence": "maybe"})"))
              .find("level in (0,1) or \"none\"") != std::string::npos);
    CHECK(error_of(with_triplet(
              R"({"statistic": "cdf", "epistemic": {"kind": "slice"}, "confidence": "none"})"))
              .find("unknown epistemic kind \"slice\"") != std::string::npos);
    CHECK(error_of(with_triplet(
              R"({"statistic": "cdf", "epistemic": {"kind": "fixed", "alpha": 1.5}, "confidence": "none"})"))
              .find("fixed alpha must lie in [0,1]") != std::string::npos);
    CHECK(error_of(with_triplet(
              R"({"statistic": "cdf", "epistemic": {"kind": "grid", "levels": 1}, "confidence": "none"})"))
              .find("at least 2 levels") != std::string::npos);
    CHECK(error_of(with_triplet(
              R"({"statistic": 1.2, "epistemic": {"kind": "fixed", "alpha": 0.0}, "confidence": "none"})"))
              .find("quantile must lie in (0,1)") != std::string::npos);
}

TEST_CASE("scalar field validation") {
    CHECK(error_of(test_util::desk_config_json(kCdfFixed0, "\"sample_size\": 0"))
              .find("sample_size must be at least 1") != std::string::npos);
    CHECK(error_of(test_util::desk_config_json(kCdfFixed0, "\"sample_size\": -5"))
              .find("non-negative integer") != std::string::npos);
    CHECK(error_of(test_util::desk_config_json(kCdfFixed0, "\"vertex_limit\": 0"))
              .find("vertex_limit must be at least 1") != std::string::npos);
    CHECK(error_of(test_util::desk_config_json(kCdfFixed0, "\"epistemic_eval\": \"corner\""))
              .find("\"vertex\" or \"interval\"") != std::string::npos);

    std::string negative_seed = test_util::desk_config_json(kCdfFixed0);
    const auto pos = negative_seed.find("\"seed\": 42");
    negative_seed.replace(pos, 10, "\"seed\": -1");
    CHECK(error_of(negative_seed).find("seed must be a non-negative integer") !=
          std::string::npos);
    std::string real_seed = test_util::desk_config_json(kCdfFixed0);
    real_seed.replace(real_seed.find("\"seed\": 42"), 10, "\"seed\": 1.5");
    CHECK(error_of(real_seed).find("seed must be a non-negative integer") !=
          std::string::npos);
}

TEST_CASE("independent problems are collected into one report") {
    std::string text = test_util::desk_config_json(kCdfFixed0, "\"sample_size\": 0");
    text.replace(text.find("\"hi\": 1.0"), 9, "\"hi\": 0.0");
    const std::string err = error_of(text);
    CHECK(err.find("uniform: need lo < hi") != std::string::npos);
    CHECK(err.find("sample_size must be at least 1") != std::string::npos);
    CHECK(err.find("; ") != std::string::npos);
}

TEST_CASE("load_config reports the path") {
    try {
        rafu::load_config("/nonexistent/path/study.json");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/path/study.json") !=
              std::string::npos);
    }
}

TEST_CASE("every shipped config loads and plans") {
    struct Expect {
        const char* file;
        ScheduleKind kind;
        std::size_t sample_size;
        std::size_t eval_count;
    };
    const std::vector<Expect> expected = {
        {"quantile_bound.json", ScheduleKind::Fixed, 90, 90},
        {"mean_estimate.json", ScheduleKind::Random, 100, 100},
        {"optimistic_pessimistic.json", ScheduleKind::Dual, 100, 200},
        {"full_grid.json", ScheduleKind::Grid, 100, 2100},
        {"correlated_flow.json", ScheduleKind::Fixed, 29, 29},
        {"interval_strategy.json", ScheduleKind::Grid, 50, 550},
    };
    for (const auto& e : expected) {
        INFO(e.file);
        const auto cfg = rafu::load_config(config_dir() + "/" + e.file);
        const auto plan = make_plan(cfg.triplet, cfg);
        CHECK(plan.kind == e.kind);
        CHECK(plan.sample_size == e.sample_size);
        CHECK(plan.eval_count == e.eval_count);
        CHECK(plan.config_digest == cfg.digest);
    }
    const auto interval_cfg = rafu::load_config(config_dir() + "/interval_strategy.json");
    CHECK(interval_cfg.epistemic_eval == EvalStrategy::IntervalArith);
    const auto flow_cfg = rafu::load_config(config_dir() + "/correlated_flow.json");
    REQUIRE(flow_cfg.correlation.has_value());
    CHECK(flow_cfg.correlation->dimension() == 3);
}
