#ifndef RAFU_INTERVAL_HPP
#define RAFU_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rafu {

/// Thrown when an evaluation leaves the domain of an operation
/// (division by an interval containing zero, log of a non-positive
/// interval, non-finite corner value, ...). Callers that run whole
/// campaigns catch this per evaluation and record a failure instead
/// of aborting.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi))
            throw std::invalid_argument("Interval: lo must be <= hi, got [" +
                                        std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }

    static Interval point(double v) { return Interval(v, v); }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_point() const { return lo == hi; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }
};

// Natural interval extensions of the arithmetic operations. These give
// outer enclosures of the exact range; no directed rounding is applied.

inline Interval operator+(const Interval& a, const Interval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains(0.0))
        throw EvalError("division by an interval containing zero [" +
                        std::to_string(b.lo) + ", " + std::to_string(b.hi) + "]");
    const double q1 = a.lo / b.lo;
    const double q2 = a.lo / b.hi;
    const double q3 = a.hi / b.lo;
    const double q4 = a.hi / b.hi;
    return {std::min({q1, q2, q3, q4}), std::max({q1, q2, q3, q4})};
}

/// x^n for integer n. Even powers fold the sign, odd powers are monotone.
inline Interval pow_int(const Interval& x, long long n) {
    if (n == 0) return Interval::point(1.0);
    if (n < 0) return Interval::point(1.0) / pow_int(x, -n);
    const double pl = std::pow(x.lo, static_cast<double>(n));
    const double ph = std::pow(x.hi, static_cast<double>(n));
    if (n % 2 != 0) return {pl, ph};
    if (x.contains(0.0)) return {0.0, std::max(pl, ph)};
    return {std::min(pl, ph), std::max(pl, ph)};
}

inline Interval exp(const Interval& x) { return {std::exp(x.lo), std::exp(x.hi)}; }

inline Interval log(const Interval& x) {
    if (x.lo <= 0.0)
        throw EvalError("ln of an interval touching values <= 0 [" +
                        std::to_string(x.lo) + ", " + std::to_string(x.hi) + "]");
    return {std::log(x.lo), std::log(x.hi)};
}

inline Interval sqrt(const Interval& x) {
    if (x.lo < 0.0)
        throw EvalError("sqrt of an interval reaching below 0 [" +
                        std::to_string(x.lo) + ", " + std::to_string(x.hi) + "]");
    return {std::sqrt(x.lo), std::sqrt(x.hi)};
}

inline Interval abs(const Interval& x) {
    if (x.lo >= 0.0) return x;
    if (x.hi <= 0.0) return -x;
    return {0.0, std::max(-x.lo, x.hi)};
}

inline Interval min(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline Interval max(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

namespace detail {
// True iff some k in Z has period*k + offset inside [lo, hi].
inline bool grid_point_in(double lo, double hi, double offset, double period) {
    const double klo = std::ceil((lo - offset) / period);
    return offset + klo * period <= hi;
}
} // namespace detail

inline Interval sin(const Interval& x) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    constexpr double half_pi = 1.5707963267948966192313216916398;
    if (x.width() >= two_pi) return {-1.0, 1.0};
    double lo = std::min(std::sin(x.lo), std::sin(x.hi));
    double hi = std::max(std::sin(x.lo), std::sin(x.hi));
    if (detail::grid_point_in(x.lo, x.hi, half_pi, two_pi)) hi = 1.0;
    if (detail::grid_point_in(x.lo, x.hi, -half_pi, two_pi)) lo = -1.0;
    return {lo, hi};
}

inline Interval cos(const Interval& x) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    constexpr double pi = 3.1415926535897932384626433832795;
    if (x.width() >= two_pi) return {-1.0, 1.0};
    double lo = std::min(std::cos(x.lo), std::cos(x.hi));
    double hi = std::max(std::cos(x.lo), std::cos(x.hi));
    if (detail::grid_point_in(x.lo, x.hi, 0.0, two_pi)) hi = 1.0;
    if (detail::grid_point_in(x.lo, x.hi, pi, two_pi)) lo = -1.0;
    return {lo, hi};
}

/// Smallest interval containing both arguments.
inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

} // namespace rafu

#endif
