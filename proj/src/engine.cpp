#include "rafu/engine.hpp"

#include <string>
#include <utility>

#include "rafu/config.hpp"
#include "rafu/model.hpp"
#include "rafu/orderstats.hpp"
#include "rafu/rng.hpp"

namespace rafu {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

const char* schedule_kind_name(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Fixed: return "fixed";
        case ScheduleKind::Random: return "random_alpha";
        case ScheduleKind::Dual: return "dual";
        case ScheduleKind::Grid: return "grid";
    }
    return "?";
}

void validate_triplet(const DMTriplet& t) {
    if (t.quantile && !(*t.quantile > 0.0 && *t.quantile < 1.0))
        throw ValidationError("triplet: quantile must lie in (0,1), got " +
                              std::to_string(*t.quantile));
    if (t.confidence && !(*t.confidence > 0.0 && *t.confidence < 1.0))
        throw ValidationError("triplet: confidence must lie in (0,1), got " +
                              std::to_string(*t.confidence));
    std::visit(overloaded{
                   [](const FixedAlpha& f) {
                       if (!(f.alpha >= 0.0 && f.alpha <= 1.0))
                           throw ValidationError("triplet: fixed alpha must lie in [0,1], got " +
                                                 std::to_string(f.alpha));
                   },
                   [](const RandomAlpha&) {},
                   [](const DualBounds&) {},
                   [](const AlphaGrid& g) {
                       if (g.levels < 2)
                           throw ValidationError("triplet: grid needs at least 2 levels, got " +
                                                 std::to_string(g.levels));
                   },
               },
               t.epistemic);
}

Plan make_plan(const DMTriplet& triplet, const StudyConfig& config) {
    validate_triplet(triplet);

    Plan plan;
    plan.seed = config.seed;
    plan.config_digest = config.digest;

    if (triplet.confidence) {
        if (!triplet.quantile)
            throw ValidationError(
                "triplet: a confidence target needs a quantile target; the "
                "full-distribution view carries no order-statistic guarantee");
        const WilksQuery query{*triplet.quantile, *triplet.confidence, BoundSide::Upper};
        const std::size_t n_min = wilks_min_size(query);
        if (config.sample_size && *config.sample_size < n_min)
            throw ValidationError("sample_size " + std::to_string(*config.sample_size) +
                                  " cannot reach confidence " +
                                  std::to_string(*triplet.confidence) + " for the " +
                                  std::to_string(*triplet.quantile) +
                                  " quantile; at least " + std::to_string(n_min) +
                                  " samples are needed");
        plan.sample_size = config.sample_size ? *config.sample_size : n_min;
        const auto rank =
            wilks_best_rank(plan.sample_size, *triplet.quantile, *triplet.confidence);
        plan.rank_from_top = rank.value(); // sample_size >= n_min, so rank 1 exists
        plan.achieved_confidence =
            wilks_confidence(plan.sample_size, *plan.rank_from_top, *triplet.quantile);
    } else {
        if (!config.sample_size)
            throw ValidationError(
                "sample_size is required when the triplet has no confidence target");
        plan.sample_size = *config.sample_size;
    }
    if (plan.sample_size == 0) throw ValidationError("sample_size must be at least 1");

    std::visit(overloaded{
                   [&](const FixedAlpha& f) {
                       plan.kind = ScheduleKind::Fixed;
                       plan.levels = {f.alpha};
                   },
                   [&](const RandomAlpha&) {
                       plan.kind = ScheduleKind::Random;
                       RngStream alphas(plan.seed, stream_id("schedule:alpha"));
                       plan.random_alphas.resize(plan.sample_size);
                       for (auto& a : plan.random_alphas) a = alphas.next_uniform();
                   },
                   [&](const DualBounds&) {
                       plan.kind = ScheduleKind::Dual;
                       plan.levels = {0.0, 1.0};
                   },
                   [&](const AlphaGrid& g) {
                       plan.kind = ScheduleKind::Grid;
                       plan.levels.resize(g.levels);
                       for (std::size_t j = 0; j < g.levels; ++j)
                           plan.levels[j] =
                               static_cast<double>(j) / static_cast<double>(g.levels - 1);
                   },
               },
               triplet.epistemic);

    plan.eval_count = plan.sample_size * plan.levels_per_sample();
    return plan;
}

FuzzySample propagate(const Plan& plan, const StudyConfig& config) {
    if (plan.config_digest != config.digest)
        throw DigestMismatchError(
            "plan was produced from a different config (digest mismatch); rerun plan");
    if (plan.sample_size == 0) throw ValidationError("plan has no samples");
    if (plan.kind == ScheduleKind::Random &&
        plan.random_alphas.size() != plan.sample_size)
        throw ValidationError("plan's random alpha schedule does not match its sample size");

    const std::size_t n = plan.sample_size;

    std::vector<const Parameter*> aleatory;
    std::vector<const Parameter*> epistemic;
    for (const auto& p : config.parameters)
        (p.is_aleatory() ? aleatory : epistemic).push_back(&p);

    // One named substream per parameter: adding or reordering parameters
    // never changes the draws of the existing ones.
    std::vector<std::vector<double>> columns;
    columns.reserve(aleatory.size());
    for (const auto* p : aleatory) {
        RngStream stream(plan.seed, stream_id("param:" + p->name));
        columns.push_back(sample(std::get<ProbabilityDist>(p->dist), stream, n));
    }
    if (config.correlation) {
        RngStream stream(plan.seed, stream_id("rankcorr"));
        columns = induce_rank_correlation(columns, *config.correlation, stream);
    }

    // One reusable box; slots are updated in place per (sample, alpha).
    Box box;
    std::vector<Box::iterator> aleatory_slot;
    std::vector<Box::iterator> epistemic_slot;
    for (const auto* p : aleatory)
        aleatory_slot.push_back(box.emplace(p->name, 0.0).first);
    for (const auto* p : epistemic)
        epistemic_slot.push_back(box.emplace(p->name, Interval::point(0.0)).first);

    FuzzySample out;
    out.plan = plan;
    out.records.reserve(plan.eval_count);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < aleatory.size(); ++k)
            aleatory_slot[k]->second = columns[k][i];
        for (double alpha : plan.alphas_for(i)) {
            for (std::size_t e = 0; e < epistemic.size(); ++e)
                epistemic_slot[e]->second =
                    std::get<PossibilityDist>(epistemic[e]->dist).alpha_cut(alpha);
            FuzzyRecord rec;
            rec.sample_index = i;
            rec.alpha = alpha;
            ++out.eval_calls;
            try {
                rec.output = config.epistemic_eval == EvalStrategy::Vertex
                                 ? eval_vertex(config.model, box, config.vertex_limit)
                                 : eval_interval(config.model, box);
            } catch (const EvalError& ex) {
                rec.error = ex.what();
            } catch (const std::invalid_argument& ex) {
                rec.error = ex.what();
            }
            out.records.push_back(std::move(rec));
        }
    }

    if (out.failure_count() == out.records.size()) {
        std::string first = out.records.empty() ? "" : out.records.front().error;
        throw EvalError("all " + std::to_string(out.records.size()) +
                        " evaluations failed; first failure: " + first);
    }
    return out;
}

} // namespace rafu
