#ifndef RAFU_ENGINE_HPP
#define RAFU_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rafu/interval.hpp"
#include "rafu/possibility.hpp" // ValidationError

namespace rafu {

struct StudyConfig;

/// Thrown when a plan or sample is paired with a config it was not
/// produced from.
struct DigestMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// How the epistemic dimension is presented to the decision maker: a single
// alpha-cut, one uniform random cut per sample, the two extreme cuts, or a
// full grid of cuts.
struct FixedAlpha {
    double alpha = 0.0;
};
struct RandomAlpha {};
struct DualBounds {};
struct AlphaGrid {
    std::size_t levels = 21;
};
using EpistemicChoice = std::variant<FixedAlpha, RandomAlpha, DualBounds, AlphaGrid>;

/// The decision maker's pre-propagation choice: which statistic of the
/// response is wanted (a quantile level, or the full distribution when
/// unset), how the epistemic uncertainty is summarized, and with which
/// confidence the statistic must be covered (unset = no guarantee
/// requested, sample size must then come from the config).
struct DMTriplet {
    std::optional<double> quantile;
    EpistemicChoice epistemic = FixedAlpha{0.0};
    std::optional<double> confidence;
};

/// Throws ValidationError if any triplet field is out of range.
void validate_triplet(const DMTriplet& triplet);

enum class ScheduleKind { Fixed, Random, Dual, Grid };

const char* schedule_kind_name(ScheduleKind kind);

/// Everything `propagate` will spend, fixed before any model run so the
/// decision maker can revise the triplet if the budget is unacceptable.
struct Plan {
    std::size_t sample_size = 0;
    ScheduleKind kind = ScheduleKind::Fixed;
    std::vector<double> levels;        // alpha levels shared by every sample; empty for Random
    std::vector<double> random_alphas; // one alpha per sample; Random only
    std::size_t eval_count = 0;        // sample_size * levels per sample
    std::optional<std::size_t> rank_from_top;
    std::optional<double> achieved_confidence;
    std::uint64_t seed = 0;
    std::uint64_t config_digest = 0;

    std::size_t levels_per_sample() const {
        return kind == ScheduleKind::Random ? 1 : levels.size();
    }
    std::vector<double> alphas_for(std::size_t sample_index) const {
        if (kind == ScheduleKind::Random) return {random_alphas.at(sample_index)};
        return levels;
    }
};

/// One scheduled model evaluation: the interval image of the alpha-cut
/// box, or the failure that prevented it.
struct FuzzyRecord {
    std::size_t sample_index = 0;
    double alpha = 0.0;
    std::optional<Interval> output;
    std::string error; // empty on success

    bool ok() const { return output.has_value(); }
};

/// A collection of N fuzzy numbers, each carried by one aleatory sample
/// with probability 1/N, stored cut by cut.
struct FuzzySample {
    std::vector<FuzzyRecord> records;
    Plan plan;
    std::size_t eval_calls = 0; // interval-image evaluations actually made

    std::size_t failure_count() const {
        std::size_t n = 0;
        for (const auto& r : records)
            if (!r.ok()) ++n;
        return n;
    }
};

/// Turns the triplet into a sampling plan. With a confidence target the
/// sample size comes from order statistics (an explicit config
/// sample_size may only enlarge it; the covering rank deepens to match);
/// without one the config's explicit sample_size is used as given.
/// Random-alpha schedules are drawn here, from a substream independent of
/// the aleatory ones.
Plan make_plan(const DMTriplet& triplet, const StudyConfig& config);

/// Executes the plan: N aleatory vectors (rank-correlated when the config
/// says so), one box evaluation per scheduled (sample, alpha) pair.
/// Deterministic for a fixed plan. Per-evaluation failures become failure
/// records; only an all-failed run throws.
FuzzySample propagate(const Plan& plan, const StudyConfig& config);

} // namespace rafu

#endif
