#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rafu/orderstats.hpp"
#include "rafu/rng.hpp"

using rafu::BoundSide;
using rafu::RngStream;
using rafu::WilksQuery;

TEST_CASE("one-sided minimum sample sizes") {
    CHECK(rafu::wilks_min_size({0.95, 0.99, BoundSide::Upper}) == 90);
    CHECK(rafu::wilks_min_size({0.95, 0.95, BoundSide::Upper}) == 59);
    CHECK(rafu::wilks_min_size({0.5, 0.5, BoundSide::Upper}) == 1);
    CHECK(rafu::wilks_min_size({0.9, 0.95, BoundSide::Upper}) == 29);
    // the lower side mirrors the upper one
    CHECK(rafu::wilks_min_size({0.05, 0.99, BoundSide::Lower}) == 90);
    CHECK(rafu::wilks_min_size({0.5, 0.5, BoundSide::Lower}) == 1);
}

TEST_CASE("two-sided minimum sample sizes") {
    CHECK(rafu::wilks_min_size({0.95, 0.95, BoundSide::TwoSided}) == 93);
    CHECK(rafu::wilks_min_size({0.95, 0.99, BoundSide::TwoSided}) == 130);
}

TEST_CASE("minimum sizes are minimal") {
    for (double q : {0.5, 0.8, 0.9, 0.95, 0.99})
        for (double c : {0.5, 0.9, 0.95, 0.99}) {
            const std::size_t n = rafu::wilks_min_size({q, c, BoundSide::Upper});
            CHECK(rafu::wilks_confidence(n, 1, q) >= c);
            if (n > 1) CHECK(rafu::wilks_confidence(n - 1, 1, q) < c);
        }
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(rafu::wilks_min_size({0.0, 0.95}), std::domain_error);
    CHECK_THROWS_AS(rafu::wilks_min_size({1.0, 0.95}), std::domain_error);
    CHECK_THROWS_AS(rafu::wilks_min_size({0.95, 0.0}), std::domain_error);
    CHECK_THROWS_AS(rafu::wilks_min_size({0.95, 1.0}), std::domain_error);
    CHECK_THROWS_AS(rafu::wilks_confidence(10, 1, 0.0), std::domain_error);
    CHECK_THROWS_AS(rafu::wilks_confidence(10, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(rafu::wilks_confidence(10, 11, 0.95), std::invalid_argument);
}

TEST_CASE("rank confidence values") {
    // sample maximum of 90 draws vs the 95th percentile
    CHECK(rafu::wilks_confidence(90, 1, 0.95) ==
          doctest::Approx(0.99011163529034107).epsilon(1e-14));
    CHECK(rafu::wilks_confidence(89, 1, 0.95) ==
          doctest::Approx(0.98959119504246429).epsilon(1e-14));
    CHECK(rafu::wilks_confidence(59, 1, 0.95) ==
          doctest::Approx(0.9515054747505769).epsilon(1e-14));
    CHECK(rafu::wilks_confidence(1, 1, 0.5) == 0.5);
    // second-largest of 90 drops below the 0.99 requirement
    CHECK(rafu::wilks_confidence(90, 2, 0.95) ==
          doctest::Approx(0.94327201298143).epsilon(1e-10));
}

TEST_CASE("rank confidence is monotone") {
    // deeper ranks lose confidence
    for (std::size_t r = 1; r < 10; ++r)
        CHECK(rafu::wilks_confidence(100, r + 1, 0.9) <=
              rafu::wilks_confidence(100, r, 0.9));
    // more samples gain confidence
    for (std::size_t n = 10; n < 200; n += 17)
        CHECK(rafu::wilks_confidence(n + 1, 1, 0.95) >=
              rafu::wilks_confidence(n, 1, 0.95));
    // higher quantiles are harder to cover
    CHECK(rafu::wilks_confidence(50, 1, 0.99) < rafu::wilks_confidence(50, 1, 0.9));
}

TEST_CASE("best usable rank for a fixed budget") {
    CHECK(rafu::wilks_best_rank(89, 0.95, 0.99) == std::nullopt);
    CHECK(rafu::wilks_best_rank(90, 0.95, 0.99) == std::size_t{1});
    // a large budget lets the bound sink toward the quantile itself
    CHECK(rafu::wilks_best_rank(1000, 0.5, 0.5) == std::size_t{500});
    // every returned rank is usable and the next one is not
    for (std::size_t n : {90, 200, 500}) {
        const auto rank = rafu::wilks_best_rank(n, 0.95, 0.99);
        REQUIRE(rank.has_value());
        CHECK(rafu::wilks_confidence(n, *rank, 0.95) >= 0.99);
        if (*rank < n) CHECK(rafu::wilks_confidence(n, *rank + 1, 0.95) < 0.99);
    }
}

TEST_CASE("sample maximum covers the quantile at the stated rate") {
    // with N = 90 the maximum exceeds the 0.95 quantile in ~99.01% of runs
    const std::size_t n = rafu::wilks_min_size({0.95, 0.99, BoundSide::Upper});
    std::size_t covered = 0;
    const std::size_t trials = 10000;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream stream(4242, t);
        double max_u = 0.0;
        for (std::size_t i = 0; i < n; ++i) max_u = std::max(max_u, stream.next_uniform());
        if (max_u >= 0.95) ++covered;
    }
    const double rate = double(covered) / double(trials);
    CHECK(rate >= 0.98);
    CHECK(rate <= 1.0);
}
