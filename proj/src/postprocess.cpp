#include "rafu/postprocess.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <vector>

namespace rafu {

namespace {

std::string level_text(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

std::string available_levels(const FuzzySample& sample) {
    std::set<double> seen;
    for (const auto& r : sample.records) seen.insert(r.alpha);
    std::string out;
    for (double a : seen) {
        if (!out.empty()) out += ", ";
        out += level_text(a);
    }
    return out.empty() ? "(none)" : out;
}

} // namespace

PBox pbox_at_alpha(const FuzzySample& sample, double alpha) {
    std::vector<double> los, his;
    std::size_t failures = 0;
    bool level_seen = false;
    for (const auto& r : sample.records) {
        if (r.alpha != alpha) continue;
        level_seen = true;
        if (!r.ok()) {
            ++failures;
            continue;
        }
        los.push_back(r.output->lo);
        his.push_back(r.output->hi);
    }
    if (!level_seen)
        throw ValidationError("no records at alpha=" + level_text(alpha) +
                              "; available levels: " + available_levels(sample));
    if (los.empty())
        throw ValidationError("every record at alpha=" + level_text(alpha) + " failed");
    return {empirical_cdf(his), empirical_cdf(los), "alpha=" + level_text(alpha), failures};
}

PBox mean_pbox(const FuzzySample& sample) {
    switch (sample.plan.kind) {
        case ScheduleKind::Random: {
            std::vector<double> los, his;
            std::size_t failures = 0;
            for (const auto& r : sample.records) {
                if (!r.ok()) {
                    ++failures;
                    continue;
                }
                los.push_back(r.output->lo);
                his.push_back(r.output->hi);
            }
            if (los.empty()) throw ValidationError("every record failed");
            return {empirical_cdf(his), empirical_cdf(los), "mean", failures};
        }
        case ScheduleKind::Grid: {
            std::vector<StepFunction> lows, ups;
            std::size_t failures = 0;
            for (double alpha : sample.plan.levels) {
                PBox slice = pbox_at_alpha(sample, alpha);
                lows.push_back(std::move(slice.f_low));
                ups.push_back(std::move(slice.f_up));
                failures += slice.failures;
            }
            return {step_mean(lows), step_mean(ups), "mean", failures};
        }
        case ScheduleKind::Fixed:
        case ScheduleKind::Dual:
            throw ValidationError(
                "mean p-box is defined for random_alpha and grid schedules only, not " +
                std::string(schedule_kind_name(sample.plan.kind)));
    }
    throw std::logic_error("unreachable");
}

std::pair<PBox, PBox> double_pair(const FuzzySample& sample) {
    PBox pessimistic = pbox_at_alpha(sample, 0.0);
    PBox optimistic = pbox_at_alpha(sample, 1.0);
    pessimistic.label = "alpha=0 pessimistic";
    optimistic.label = "alpha=1 optimistic";
    return {std::move(pessimistic), std::move(optimistic)};
}

double percentile_bound(const FuzzySample& sample, const Plan& plan,
                        bool accept_failures) {
    if (plan.kind != ScheduleKind::Fixed)
        throw ValidationError("percentile bound needs a fixed-alpha schedule, not " +
                              std::string(schedule_kind_name(plan.kind)));
    if (!plan.rank_from_top)
        throw ValidationError(
            "percentile bound needs a plan with a confidence target (no rank set)");

    std::vector<double> his;
    std::size_t failures = 0;
    for (const auto& r : sample.records) {
        if (r.ok())
            his.push_back(r.output->hi);
        else
            ++failures;
    }
    if (failures > 0 && !accept_failures)
        throw ValidationError(std::to_string(failures) +
                              " evaluation(s) failed; the rank guarantee needs a complete "
                              "sample (accept_failures counts them as +inf instead)");
    his.insert(his.end(), failures, std::numeric_limits<double>::infinity());
    const std::size_t rank = *plan.rank_from_top;
    if (rank > his.size())
        throw ValidationError("rank " + std::to_string(rank) + " exceeds the " +
                              std::to_string(his.size()) + " recorded evaluations");
    std::sort(his.begin(), his.end(), std::greater<double>());
    return his[rank - 1];
}

} // namespace rafu
