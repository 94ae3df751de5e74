#include "rafu/orderstats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rafu {

namespace {

void check_levels(double quantile, double confidence) {
    if (!(quantile > 0.0 && quantile < 1.0))
        throw std::domain_error("quantile level must lie in (0,1), got " +
                                std::to_string(quantile));
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::domain_error("confidence must lie in (0,1), got " +
                                std::to_string(confidence));
}

double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

// coverage of the (min, max) pair for a central share q of the population
double two_sided_coverage(std::size_t n, double q) {
    const double nd = static_cast<double>(n);
    return 1.0 - std::pow(q, nd) - nd * (1.0 - q) * std::pow(q, nd - 1.0);
}

std::size_t one_sided_min_size(double q, double confidence) {
    // smallest N with 1 - q^N >= confidence
    std::size_t n = static_cast<std::size_t>(
        std::ceil(std::log1p(-confidence) / std::log(q)));
    if (n == 0) n = 1;
    while (1.0 - std::pow(q, double(n)) < confidence) ++n;
    while (n > 1 && 1.0 - std::pow(q, double(n - 1)) >= confidence) --n;
    return n;
}

} // namespace

std::size_t wilks_min_size(const WilksQuery& q) {
    check_levels(q.quantile, q.confidence);
    switch (q.side) {
        case BoundSide::Upper: return one_sided_min_size(q.quantile, q.confidence);
        case BoundSide::Lower: return one_sided_min_size(1.0 - q.quantile, q.confidence);
        case BoundSide::TwoSided: {
            std::size_t n = 2;
            while (two_sided_coverage(n, q.quantile) < q.confidence) ++n;
            return n;
        }
    }
    throw std::logic_error("unreachable");
}

double wilks_confidence(std::size_t n, std::size_t rank_from_top, double quantile) {
    if (!(quantile > 0.0 && quantile < 1.0))
        throw std::domain_error("quantile level must lie in (0,1), got " +
                                std::to_string(quantile));
    if (rank_from_top < 1 || rank_from_top > n)
        throw std::invalid_argument("rank_from_top must lie in [1, n], got " +
                                    std::to_string(rank_from_top) + " for n=" +
                                    std::to_string(n));
    const double log_q = std::log(quantile);
    const double log_p = std::log1p(-quantile);
    double tail = 0.0;
    for (std::size_t k = 0; k < rank_from_top; ++k)
        tail += std::exp(log_choose(n, k) + double(k) * log_p +
                         double(n - k) * log_q);
    return std::min(std::max(1.0 - tail, 0.0), 1.0);
}

std::optional<std::size_t> wilks_best_rank(std::size_t n, double quantile,
                                           double confidence) {
    check_levels(quantile, confidence);
    if (n == 0) throw std::domain_error("need n >= 1");
    const double log_q = std::log(quantile);
    const double log_p = std::log1p(-quantile);
    double tail = 0.0;
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < n; ++k) {
        tail += std::exp(log_choose(n, k) + double(k) * log_p +
                         double(n - k) * log_q);
        if (1.0 - tail < confidence) break;
        best = k + 1;
    }
    return best;
}

} // namespace rafu
