#ifndef RAFU_ORDERSTATS_HPP
#define RAFU_ORDERSTATS_HPP

#include <cstddef>
#include <optional>

namespace rafu {

enum class BoundSide { Upper, Lower, TwoSided };

/// Order-statistics sizing request: quantile is the level the bound must
/// cover, confidence the probability with which it must do so.
struct WilksQuery {
    double quantile;   // in (0,1)
    double confidence; // in (0,1)
    BoundSide side = BoundSide::Upper;
};

/// Smallest sample size N whose extreme order statistic bounds the
/// requested quantile with the requested confidence. Upper side: smallest
/// N with 1 - quantile^N >= confidence; lower side is the mirror image;
/// two-sided uses the (min, max) pair.
std::size_t wilks_min_size(const WilksQuery& q);

/// Confidence that the rank_from_top-th largest of n i.i.d. draws lies at
/// or above the quantile: 1 - sum_{k<rank} C(n,k) (1-quantile)^k
/// quantile^(n-k), accumulated in log space.
double wilks_confidence(std::size_t n, std::size_t rank_from_top, double quantile);

/// Largest rank_from_top whose order statistic still carries the required
/// confidence for a budget-imposed n (a deeper rank gives a tighter
/// bound), or nullopt when even the sample maximum is not enough.
std::optional<std::size_t> wilks_best_rank(std::size_t n, double quantile,
                                           double confidence);

} // namespace rafu

#endif
