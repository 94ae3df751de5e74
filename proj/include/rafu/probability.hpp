#ifndef RAFU_PROBABILITY_HPP
#define RAFU_PROBABILITY_HPP

#include <cstddef>
#include <variant>
#include <vector>

#include "rafu/possibility.hpp" // ValidationError
#include "rafu/rng.hpp"

namespace rafu {

/// Parametric or empirical probability law for an aleatory parameter.
class ProbabilityDist {
public:
    struct Uniform {
        double lo, hi;
    };
    struct Normal {
        double mean, sd;
    };
    struct LogNormal {
        double log_mean, log_sd;
    };
    struct TriangularPdf {
        double a, mode, b;
    };
    struct Empirical {
        std::vector<double> values; // stored sorted
    };
    using Family = std::variant<Uniform, Normal, LogNormal, TriangularPdf, Empirical>;

    static ProbabilityDist uniform(double lo, double hi);
    static ProbabilityDist normal(double mean, double sd);
    static ProbabilityDist lognormal(double log_mean, double log_sd);
    static ProbabilityDist triangular_pdf(double a, double mode, double b);
    static ProbabilityDist empirical(std::vector<double> values);

    /// Quantile function F^-1(u) for u in (0, 1). For the empirical family
    /// this is the smallest stored value x with F(x) >= u.
    double inverse_cdf(double u) const;

    const Family& family() const { return family_; }

private:
    explicit ProbabilityDist(Family f) : family_(std::move(f)) {}
    Family family_;
};

/// n i.i.d. inverse-transform draws from the stream. Bit-reproducible for
/// a fixed (seed, stream) pair.
std::vector<double> sample(const ProbabilityDist& dist, RngStream& stream, std::size_t n);

/// Target Spearman correlation matrix over the K aleatory parameters.
class RankCorrelationSpec {
public:
    /// Must be symmetric with unit diagonal, entries in [-1,1] and
    /// positive semi-definite.
    explicit RankCorrelationSpec(std::vector<std::vector<double>> spearman);

    std::size_t dimension() const { return matrix_.size(); }
    const std::vector<std::vector<double>>& matrix() const { return matrix_; }

private:
    std::vector<std::vector<double>> matrix_;
};

/// Rank-reorders the columns (Iman-Conover) so their Spearman correlation
/// matrix approximates the target while each column keeps its exact
/// marginal (every output column is a permutation of the input one).
/// Requires all columns of equal length n >= K+1.
std::vector<std::vector<double>> induce_rank_correlation(
    const std::vector<std::vector<double>>& columns, const RankCorrelationSpec& spec,
    RngStream& stream);

/// Right-continuous non-decreasing step function, 0 left of the first
/// jump. Used for empirical CDFs and p-box bounds.
class StepFunction {
public:
    /// xs strictly increasing, values non-decreasing; value(i) holds at
    /// and right of xs(i).
    StepFunction(std::vector<double> xs, std::vector<double> values);

    double operator()(double x) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const StepFunction& a, const StepFunction& b) {
        return a.xs_ == b.xs_ && a.values_ == b.values_;
    }

private:
    std::vector<double> xs_;
    std::vector<double> values_;
};

/// Empirical CDF F(x) = #{v <= x} / n of a non-empty sample.
StepFunction empirical_cdf(const std::vector<double>& values);

/// Pointwise equal-weight mean, computed exactly on the merged jump set.
StepFunction step_mean(const std::vector<StepFunction>& parts);

/// sup_x |a(x) - b(x)|, exact for step functions.
double sup_distance(const StepFunction& a, const StepFunction& b);

} // namespace rafu

#endif
