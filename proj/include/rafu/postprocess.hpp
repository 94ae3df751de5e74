#ifndef RAFU_POSTPROCESS_HPP
#define RAFU_POSTPROCESS_HPP

#include <string>
#include <utility>

#include "rafu/engine.hpp"
#include "rafu/probability.hpp"

namespace rafu {

/// Pair of cumulative bounds bracketing the imprecisely known response
/// CDF: f_low (built from interval upper endpoints) never exceeds f_up
/// (built from lower endpoints).
struct PBox {
    StepFunction f_low;
    StepFunction f_up;
    std::string label;
    std::size_t failures = 0; // records excluded at this level
};

/// P-box of the records at exactly this alpha level. Errors with the list
/// of available levels when the schedule never visited it.
PBox pbox_at_alpha(const FuzzySample& sample, double alpha);

/// Alpha-averaged p-box. Random-alpha schedules pool their records (each
/// sample contributes one uniformly drawn cut, so the pool is the
/// Monte-Carlo estimate of the average); grid schedules average the
/// per-level step functions exactly. Fixed and dual schedules carry no
/// average and are refused.
PBox mean_pbox(const FuzzySample& sample);

/// The two extreme p-boxes: (alpha=0 pessimistic, alpha=1 optimistic).
/// Needs a schedule that visited both levels (dual or grid).
std::pair<PBox, PBox> double_pair(const FuzzySample& sample);

/// Order-statistic upper bound on the quantile targeted by the plan: the
/// rank_from_top-th largest interval upper endpoint. Requires a
/// fixed-alpha schedule with a rank (confidence target given). Any failed
/// record voids the rank guarantee and is refused unless accept_failures
/// counts failures as +infinity instead (conservative; the bound becomes
/// +infinity when failures reach the rank).
double percentile_bound(const FuzzySample& sample, const Plan& plan,
                        bool accept_failures = false);

} // namespace rafu

#endif
