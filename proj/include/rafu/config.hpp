#ifndef RAFU_CONFIG_HPP
#define RAFU_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rafu/engine.hpp"
#include "rafu/model.hpp"
#include "rafu/possibility.hpp"
#include "rafu/probability.hpp"

namespace rafu {

enum class EvalStrategy { Vertex, IntervalArith };

/// One study input: aleatory (a probability law, sampled) or epistemic
/// (a possibility distribution, cut at the scheduled alpha levels).
struct Parameter {
    std::string name;
    std::variant<ProbabilityDist, PossibilityDist> dist;

    bool is_aleatory() const { return std::holds_alternative<ProbabilityDist>(dist); }
};

/// A full study, as read from one config file. `digest` fingerprints
/// every field except the seed, so plans and samples can refuse configs
/// they were not produced from while seed overrides stay cheap.
struct StudyConfig {
    std::vector<Parameter> parameters; // declaration order is the correlation matrix order
    std::string model_text;
    ModelAst model;
    std::optional<RankCorrelationSpec> correlation;
    DMTriplet triplet;
    std::optional<std::size_t> sample_size;
    EvalStrategy epistemic_eval = EvalStrategy::Vertex;
    std::size_t vertex_limit = 12;
    std::uint64_t seed = 0;
    std::uint64_t digest = 0;

    std::size_t aleatory_count() const {
        std::size_t n = 0;
        for (const auto& p : parameters)
            if (p.is_aleatory()) ++n;
        return n;
    }
    std::size_t epistemic_count() const { return parameters.size() - aleatory_count(); }
};

/// Builds a validated StudyConfig from JSON text. Collects all semantic
/// problems (unknown keys, undeclared model variables, bad distribution
/// parameters, matrix dimension mismatches, ...) into one ValidationError.
StudyConfig parse_config(const std::string& json_text);

/// parse_config over the contents of the file at `path`.
StudyConfig load_config(const std::string& path);

} // namespace rafu

#endif
