#ifndef RAFU_POSSIBILITY_HPP
#define RAFU_POSSIBILITY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "rafu/interval.hpp"

namespace rafu {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Piecewise-linear possibility distribution over the reals.
///
/// The membership function rises from 0 to 1 and falls back to 0 as x
/// increases (plateaus allowed, including vertical steps encoded as two
/// knots sharing an x). Its alpha-cuts {x : membership(x) >= alpha} are
/// nested closed intervals; the cut at level alpha carries confidence
/// 1 - alpha. Immutable once constructed.
class PossibilityDist {
public:
    struct Knot {
        double x;
        double membership;
    };

    /// Knots must be sorted by x, quasi-concave in membership, with
    /// maximum membership exactly 1.
    explicit PossibilityDist(std::vector<Knot> knots);

    static PossibilityDist triangular(double a, double core, double b);
    static PossibilityDist trapezoidal(double a, double core_lo, double core_hi, double b);
    static PossibilityDist rectangular(double a, double b);

    /// Rebuild a distribution from expert intervals tagged with confidence
    /// levels: confidence c becomes the cut at level alpha = 1 - c. When no
    /// confidence-0 (alpha = 1) entry is present, the innermost interval is
    /// promoted to the core. Outside the given levels the cuts are clamped,
    /// not extrapolated.
    static PossibilityDist from_nested_intervals(
        const std::vector<std::pair<Interval, double>>& pairs);

    /// The closed interval {x : membership(x) >= alpha}; the support at
    /// alpha = 0. Exact linear interpolation between knots.
    Interval alpha_cut(double alpha) const;

    /// Membership at x; 0 outside the support.
    double membership(double x) const;

    Interval support() const { return {knots_.front().x, knots_.back().x}; }
    Interval core() const;
    const std::vector<Knot>& knots() const { return knots_; }

private:
    std::vector<Knot> knots_;
};

} // namespace rafu

#endif
