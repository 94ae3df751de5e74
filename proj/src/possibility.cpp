#include "rafu/possibility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rafu {

namespace {

void validate_knots(const std::vector<PossibilityDist::Knot>& knots) {
    if (knots.empty())
        throw ValidationError("possibility distribution needs at least one knot");
    double peak = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        if (!std::isfinite(k.x) || !std::isfinite(k.membership))
            throw ValidationError("possibility knot values must be finite");
        if (k.membership < 0.0 || k.membership > 1.0)
            throw ValidationError("membership out of [0,1] at x=" + std::to_string(k.x));
        if (i > 0 && knots[i - 1].x > k.x)
            throw ValidationError("possibility knots must be sorted by x");
        peak = std::max(peak, k.membership);
    }
    if (peak != 1.0)
        throw ValidationError("maximum membership must equal 1, got " + std::to_string(peak));
    // quasi-concave: non-decreasing up to the first peak, non-increasing after the last
    std::size_t first_peak = 0;
    while (knots[first_peak].membership != 1.0) ++first_peak;
    std::size_t last_peak = knots.size() - 1;
    while (knots[last_peak].membership != 1.0) --last_peak;
    for (std::size_t i = 1; i <= first_peak; ++i)
        if (knots[i].membership < knots[i - 1].membership)
            throw ValidationError("membership must be non-decreasing left of the core");
    for (std::size_t i = last_peak + 1; i < knots.size(); ++i)
        if (knots[i].membership > knots[i - 1].membership)
            throw ValidationError("membership must be non-increasing right of the core");
    for (std::size_t i = first_peak; i < last_peak; ++i)
        if (knots[i].membership != 1.0)
            throw ValidationError("membership must stay at 1 across the core");
}

std::vector<PossibilityDist::Knot> dedup(std::vector<PossibilityDist::Knot> knots) {
    auto last = std::unique(knots.begin(), knots.end(), [](const auto& a, const auto& b) {
        return a.x == b.x && a.membership == b.membership;
    });
    knots.erase(last, knots.end());
    return knots;
}

} // namespace

PossibilityDist::PossibilityDist(std::vector<Knot> knots) : knots_(dedup(std::move(knots))) {
    validate_knots(knots_);
}

PossibilityDist PossibilityDist::triangular(double a, double core, double b) {
    if (!(a <= core && core <= b))
        throw ValidationError("triangular: need a <= core <= b");
    return PossibilityDist({{a, 0.0}, {core, 1.0}, {b, 0.0}});
}

PossibilityDist PossibilityDist::trapezoidal(double a, double core_lo, double core_hi, double b) {
    if (!(a <= core_lo && core_lo <= core_hi && core_hi <= b))
        throw ValidationError("trapezoidal: need a <= core_lo <= core_hi <= b");
    return PossibilityDist({{a, 0.0}, {core_lo, 1.0}, {core_hi, 1.0}, {b, 0.0}});
}

PossibilityDist PossibilityDist::rectangular(double a, double b) {
    if (!(a <= b))
        throw ValidationError("rectangular: need a <= b");
    return PossibilityDist({{a, 1.0}, {b, 1.0}});
}

PossibilityDist PossibilityDist::from_nested_intervals(
    const std::vector<std::pair<Interval, double>>& pairs) {
    if (pairs.empty())
        throw ValidationError("from_nested_intervals: need at least one interval");

    // cut level alpha = 1 - confidence
    struct Cut {
        double alpha;
        Interval iv;
    };
    std::vector<Cut> cuts;
    cuts.reserve(pairs.size());
    for (const auto& [iv, conf] : pairs) {
        if (conf < 0.0 || conf > 1.0)
            throw ValidationError("confidence out of [0,1]: " + std::to_string(conf));
        cuts.push_back({1.0 - conf, iv});
    }
    std::sort(cuts.begin(), cuts.end(),
              [](const Cut& a, const Cut& b) { return a.alpha < b.alpha; });
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i].alpha == cuts[i - 1].alpha)
            throw ValidationError("duplicate confidence level " +
                                  std::to_string(1.0 - cuts[i].alpha));
        if (!cuts[i - 1].iv.contains(cuts[i].iv))
            throw ValidationError(
                "intervals are not nested: the one with confidence " +
                std::to_string(1.0 - cuts[i - 1].alpha) + " does not contain the one with " +
                std::to_string(1.0 - cuts[i].alpha));
    }

    // No alpha = 1 entry: promote the innermost interval to the core.
    if (cuts.back().alpha != 1.0) cuts.push_back({1.0, cuts.back().iv});

    // Nestedness makes the concatenation already sorted by x: lower
    // endpoints ascend with alpha, upper endpoints ascend when walked
    // from the core outward.
    std::vector<Knot> knots;
    for (const auto& c : cuts) knots.push_back({c.iv.lo, c.alpha});
    for (auto it = cuts.rbegin(); it != cuts.rend(); ++it)
        knots.push_back({it->iv.hi, it->alpha});
    return PossibilityDist(std::move(knots));
}

Interval PossibilityDist::alpha_cut(double alpha) const {
    if (alpha < 0.0 || alpha > 1.0 || !std::isfinite(alpha))
        throw std::domain_error("alpha_cut: alpha must lie in [0,1], got " +
                                std::to_string(alpha));
    if (alpha == 0.0) return support();
    if (alpha == 1.0) return core(); // exact; interpolation could land 1 ulp off

    double lo = knots_.front().x;
    if (knots_.front().membership < alpha) {
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            if (knots_[i].membership >= alpha) {
                const auto& p = knots_[i - 1];
                const auto& q = knots_[i];
                lo = q.x == p.x ? q.x
                                : p.x + (q.x - p.x) * (alpha - p.membership) /
                                            (q.membership - p.membership);
                break;
            }
        }
    }
    double hi = knots_.back().x;
    if (knots_.back().membership < alpha) {
        for (std::size_t i = knots_.size() - 1; i > 0; --i) {
            if (knots_[i - 1].membership >= alpha) {
                const auto& p = knots_[i - 1];
                const auto& q = knots_[i];
                hi = q.x == p.x ? p.x
                                : q.x - (q.x - p.x) * (alpha - q.membership) /
                                            (p.membership - q.membership);
                break;
            }
        }
    }
    return {lo, hi};
}

double PossibilityDist::membership(double x) const {
    if (x < knots_.front().x || x > knots_.back().x) return 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto& p = knots_[i];
        const auto& q = knots_[i + 1];
        if (x < p.x || x > q.x) continue;
        if (q.x == p.x)
            best = std::max({best, p.membership, q.membership});
        else
            best = std::max(best, p.membership + (q.membership - p.membership) *
                                                     (x - p.x) / (q.x - p.x));
    }
    if (knots_.size() == 1) best = knots_.front().membership;
    return best;
}

Interval PossibilityDist::core() const {
    std::size_t first = 0;
    while (knots_[first].membership != 1.0) ++first;
    std::size_t last = knots_.size() - 1;
    while (knots_[last].membership != 1.0) --last;
    return {knots_[first].x, knots_[last].x};
}

} // namespace rafu
