#include "rafu/config.hpp"

#include <cctype>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "rafu/rng.hpp"

namespace rafu {

namespace {

using nlohmann::json;

const json& need(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key))
        throw ValidationError(ctx + ": missing key \"" + key + "\"");
    return obj.at(key);
}

double as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) throw ValidationError(ctx + " must be a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) throw ValidationError(ctx + " must be a string");
    return v.get<std::string>();
}

std::size_t as_count(const json& v, const std::string& ctx) {
    if (!v.is_number_unsigned())
        throw ValidationError(ctx + " must be a non-negative integer");
    return v.get<std::size_t>();
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& ctx) {
    std::string unknown;
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) {
            if (!unknown.empty()) unknown += ", ";
            unknown += "\"" + item.key() + "\"";
        }
    }
    if (!unknown.empty()) throw ValidationError(ctx + ": unknown key(s) " + unknown);
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

bool is_function_name(const std::string& s) {
    static const std::set<std::string> funcs = {"sin", "cos", "exp",  "ln",
                                                "sqrt", "abs", "min", "max"};
    return funcs.count(s) != 0;
}

ProbabilityDist parse_aleatory(const json& d) {
    const std::string kind = as_string(need(d, "kind", "dist"), "dist kind");
    if (kind == "uniform") {
        check_keys(d, {"kind", "lo", "hi"}, "uniform dist");
        return ProbabilityDist::uniform(as_number(need(d, "lo", "uniform dist"), "lo"),
                                        as_number(need(d, "hi", "uniform dist"), "hi"));
    }
    if (kind == "normal") {
        check_keys(d, {"kind", "mean", "sd"}, "normal dist");
        return ProbabilityDist::normal(as_number(need(d, "mean", "normal dist"), "mean"),
                                       as_number(need(d, "sd", "normal dist"), "sd"));
    }
    if (kind == "lognormal") {
        check_keys(d, {"kind", "log_mean", "log_sd"}, "lognormal dist");
        return ProbabilityDist::lognormal(
            as_number(need(d, "log_mean", "lognormal dist"), "log_mean"),
            as_number(need(d, "log_sd", "lognormal dist"), "log_sd"));
    }
    if (kind == "triangular") {
        check_keys(d, {"kind", "a", "mode", "b"}, "triangular dist");
        return ProbabilityDist::triangular_pdf(
            as_number(need(d, "a", "triangular dist"), "a"),
            as_number(need(d, "mode", "triangular dist"), "mode"),
            as_number(need(d, "b", "triangular dist"), "b"));
    }
    if (kind == "empirical") {
        check_keys(d, {"kind", "values"}, "empirical dist");
        const json& vals = need(d, "values", "empirical dist");
        if (!vals.is_array() || vals.empty())
            throw ValidationError("empirical dist: values must be a non-empty array");
        std::vector<double> values;
        values.reserve(vals.size());
        for (const auto& v : vals) values.push_back(as_number(v, "empirical value"));
        return ProbabilityDist::empirical(std::move(values));
    }
    throw ValidationError("unknown aleatory dist kind \"" + kind +
                          "\" (expected uniform, normal, lognormal, triangular, empirical)");
}

PossibilityDist parse_epistemic(const json& d) {
    const std::string kind = as_string(need(d, "kind", "dist"), "dist kind");
    if (kind == "triangular") {
        check_keys(d, {"kind", "a", "core", "b"}, "triangular dist");
        return PossibilityDist::triangular(
            as_number(need(d, "a", "triangular dist"), "a"),
            as_number(need(d, "core", "triangular dist"), "core"),
            as_number(need(d, "b", "triangular dist"), "b"));
    }
    if (kind == "trapezoidal") {
        check_keys(d, {"kind", "a", "core_lo", "core_hi", "b"}, "trapezoidal dist");
        return PossibilityDist::trapezoidal(
            as_number(need(d, "a", "trapezoidal dist"), "a"),
            as_number(need(d, "core_lo", "trapezoidal dist"), "core_lo"),
            as_number(need(d, "core_hi", "trapezoidal dist"), "core_hi"),
            as_number(need(d, "b", "trapezoidal dist"), "b"));
    }
    if (kind == "rectangular") {
        check_keys(d, {"kind", "lo", "hi"}, "rectangular dist");
        return PossibilityDist::rectangular(
            as_number(need(d, "lo", "rectangular dist"), "lo"),
            as_number(need(d, "hi", "rectangular dist"), "hi"));
    }
    if (kind == "nested_intervals") {
        check_keys(d, {"kind", "cuts"}, "nested_intervals dist");
        const json& cuts = need(d, "cuts", "nested_intervals dist");
        if (!cuts.is_array() || cuts.empty())
            throw ValidationError("nested_intervals dist: cuts must be a non-empty array");
        std::vector<std::pair<Interval, double>> pairs;
        pairs.reserve(cuts.size());
        for (const auto& cut : cuts) {
            if (!cut.is_object())
                throw ValidationError("nested_intervals dist: each cut must be an object");
            check_keys(cut, {"lo", "hi", "confidence"}, "cut");
            pairs.emplace_back(Interval(as_number(need(cut, "lo", "cut"), "cut lo"),
                                        as_number(need(cut, "hi", "cut"), "cut hi")),
                               as_number(need(cut, "confidence", "cut"), "cut confidence"));
        }
        return PossibilityDist::from_nested_intervals(pairs);
    }
    throw ValidationError(
        "unknown epistemic dist kind \"" + kind +
        "\" (expected triangular, trapezoidal, rectangular, nested_intervals)");
}

Parameter parse_parameter(const json& item, std::size_t index) {
    const std::string ctx = "parameter " + std::to_string(index + 1);
    try {
        if (!item.is_object()) throw ValidationError("must be an object");
        check_keys(item, {"name", "kind", "dist"}, "");
        const std::string name = as_string(need(item, "name", ""), "name");
        if (!is_identifier(name))
            throw ValidationError("name \"" + name +
                                  "\" is not a valid identifier (letters, digits, "
                                  "underscores; cannot start with a digit)");
        if (is_function_name(name))
            throw ValidationError("name \"" + name +
                                  "\" collides with a built-in function");
        const std::string kind = as_string(need(item, "kind", ""), "kind");
        const json& dist = need(item, "dist", "");
        if (!dist.is_object()) throw ValidationError("dist must be an object");
        if (kind == "aleatory") return {name, parse_aleatory(dist)};
        if (kind == "epistemic") return {name, parse_epistemic(dist)};
        throw ValidationError("kind must be \"aleatory\" or \"epistemic\", got \"" +
                              kind + "\"");
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(ctx + ": " + e.what());
    } catch (const std::domain_error& e) {
        throw ValidationError(ctx + ": " + e.what());
    }
}

struct Collector {
    std::vector<std::string> errors;

    template <class F>
    void section(F&& f) {
        try {
            f();
        } catch (const ValidationError& e) {
            errors.push_back(e.what());
        } catch (const ParseError& e) {
            errors.push_back(e.what());
        }
    }

    std::string join() const {
        std::string out;
        for (const auto& e : errors) {
            if (!out.empty()) out += "; ";
            out += e;
        }
        return out;
    }
};

} // namespace

StudyConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config root must be a JSON object");

    Collector c;
    c.section([&] {
        check_keys(j,
                   {"parameters", "model", "correlation", "triplet", "sample_size",
                    "epistemic_eval", "vertex_limit", "seed"},
                   "config");
    });

    std::vector<Parameter> parameters;
    bool parameters_clean = false;
    c.section([&] {
        const json& items = need(j, "parameters", "config");
        if (!items.is_array() || items.empty())
            throw ValidationError("parameters must be a non-empty array");
        const std::size_t before = c.errors.size();
        for (std::size_t i = 0; i < items.size(); ++i)
            c.section([&] { parameters.push_back(parse_parameter(items[i], i)); });
        std::set<std::string> names;
        for (const auto& p : parameters)
            if (!names.insert(p.name).second)
                c.errors.push_back("duplicate parameter name \"" + p.name + "\"");
        parameters_clean = c.errors.size() == before && names.size() == parameters.size();
    });

    std::string model_text;
    std::optional<ModelAst> model;
    c.section([&] {
        model_text = as_string(need(j, "model", "config"), "model");
        model = parse(model_text);
    });

    std::optional<RankCorrelationSpec> correlation;
    c.section([&] {
        if (!j.contains("correlation")) return;
        const json& corr = j.at("correlation");
        if (!corr.is_object()) throw ValidationError("correlation must be an object");
        check_keys(corr, {"spearman"}, "correlation");
        const json& m = need(corr, "spearman", "correlation");
        if (!m.is_array() || m.empty())
            throw ValidationError("correlation: spearman must be a non-empty matrix");
        std::vector<std::vector<double>> matrix;
        for (const auto& row : m) {
            if (!row.is_array())
                throw ValidationError("correlation: spearman rows must be arrays");
            std::vector<double> r;
            for (const auto& v : row) r.push_back(as_number(v, "correlation entry"));
            matrix.push_back(std::move(r));
        }
        correlation.emplace(std::move(matrix));
    });

    std::optional<DMTriplet> triplet;
    c.section([&] {
        const json& t = need(j, "triplet", "config");
        if (!t.is_object()) throw ValidationError("triplet must be an object");
        check_keys(t, {"statistic", "epistemic", "confidence"}, "triplet");
        DMTriplet out;
        const json& stat = need(t, "statistic", "triplet");
        if (stat.is_string()) {
            if (stat.get<std::string>() != "cdf")
                throw ValidationError(
                    "triplet: statistic must be a quantile level in (0,1) or \"cdf\"");
        } else {
            out.quantile = as_number(stat, "triplet: statistic");
        }
        const json& conf = need(t, "confidence", "triplet");
        if (conf.is_string()) {
            if (conf.get<std::string>() != "none")
                throw ValidationError(
                    "triplet: confidence must be a level in (0,1) or \"none\"");
        } else {
            out.confidence = as_number(conf, "triplet: confidence");
        }
        const json& e = need(t, "epistemic", "triplet");
        if (!e.is_object()) throw ValidationError("triplet: epistemic must be an object");
        const std::string kind = as_string(need(e, "kind", "triplet: epistemic"), "kind");
        if (kind == "fixed") {
            check_keys(e, {"kind", "alpha"}, "triplet: epistemic");
            out.epistemic =
                FixedAlpha{as_number(need(e, "alpha", "triplet: epistemic"), "alpha")};
        } else if (kind == "random_alpha") {
            check_keys(e, {"kind"}, "triplet: epistemic");
            out.epistemic = RandomAlpha{};
        } else if (kind == "dual") {
            check_keys(e, {"kind"}, "triplet: epistemic");
            out.epistemic = DualBounds{};
        } else if (kind == "grid") {
            check_keys(e, {"kind", "levels"}, "triplet: epistemic");
            out.epistemic =
                AlphaGrid{as_count(need(e, "levels", "triplet: epistemic"), "levels")};
        } else {
            throw ValidationError("triplet: unknown epistemic kind \"" + kind +
                                  "\" (expected fixed, random_alpha, dual, grid)");
        }
        validate_triplet(out);
        triplet = out;
    });

    std::optional<std::size_t> sample_size;
    c.section([&] {
        if (!j.contains("sample_size")) return;
        const std::size_t n = as_count(j.at("sample_size"), "sample_size");
        if (n == 0) throw ValidationError("sample_size must be at least 1");
        sample_size = n;
    });

    EvalStrategy strategy = EvalStrategy::Vertex;
    c.section([&] {
        if (!j.contains("epistemic_eval")) return;
        const std::string s = as_string(j.at("epistemic_eval"), "epistemic_eval");
        if (s == "vertex")
            strategy = EvalStrategy::Vertex;
        else if (s == "interval")
            strategy = EvalStrategy::IntervalArith;
        else
            throw ValidationError("epistemic_eval must be \"vertex\" or \"interval\", got \"" +
                                  s + "\"");
    });

    std::size_t vertex_limit = 12;
    c.section([&] {
        if (!j.contains("vertex_limit")) return;
        vertex_limit = as_count(j.at("vertex_limit"), "vertex_limit");
        if (vertex_limit == 0) throw ValidationError("vertex_limit must be at least 1");
    });

    std::uint64_t seed = 0;
    c.section([&] {
        const json& s = need(j, "seed", "config");
        if (!s.is_number_unsigned())
            throw ValidationError("seed must be a non-negative integer");
        seed = s.get<std::uint64_t>();
    });

    // cross checks, only on cleanly parsed pieces
    if (parameters_clean && model) {
        std::string unknown;
        std::set<std::string> declared;
        for (const auto& p : parameters) declared.insert(p.name);
        for (const auto& v : model->variables())
            if (!declared.count(v)) {
                if (!unknown.empty()) unknown += ", ";
                unknown += v;
            }
        if (!unknown.empty())
            c.errors.push_back("model references undeclared parameter(s): " + unknown);
    }
    if (parameters_clean && correlation) {
        std::size_t k = 0;
        for (const auto& p : parameters)
            if (p.is_aleatory()) ++k;
        if (correlation->dimension() != k)
            c.errors.push_back("correlation matrix is " +
                               std::to_string(correlation->dimension()) + "x" +
                               std::to_string(correlation->dimension()) + " but there are " +
                               std::to_string(k) + " aleatory parameter(s)");
    }
    if (parameters_clean && strategy == EvalStrategy::Vertex) {
        std::size_t l = 0;
        for (const auto& p : parameters)
            if (!p.is_aleatory()) ++l;
        if (l > vertex_limit)
            c.errors.push_back("vertex evaluation of " + std::to_string(l) +
                               " epistemic parameters exceeds vertex_limit " +
                               std::to_string(vertex_limit) +
                               "; raise the limit or use epistemic_eval \"interval\"");
    }

    if (!c.errors.empty()) throw ValidationError("invalid config: " + c.join());

    json for_digest = j;
    for_digest.erase("seed");
    const std::uint64_t digest = detail::fnv1a64(for_digest.dump());

    return StudyConfig{std::move(parameters),
                       std::move(model_text),
                       std::move(*model),
                       std::move(correlation),
                       *triplet,
                       sample_size,
                       strategy,
                       vertex_limit,
                       seed,
                       digest};
}

StudyConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

} // namespace rafu
