#include "rafu/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rafu {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Inverse standard normal CDF: Acklam's rational approximation refined by
// one Halley step, giving ~1e-15 relative accuracy on (0,1).
double normal_inverse_cdf(double u) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double u_low = 0.02425;

    double x;
    if (u < u_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - u_low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = normal_cdf(x) - u;
    const double w = e * kSqrt2Pi * std::exp(0.5 * x * x);
    return x - w / (1.0 + 0.5 * x * w);
}

struct InverseCdfVisitor {
    double u;

    double operator()(const ProbabilityDist::Uniform& f) const {
        return f.lo + u * (f.hi - f.lo);
    }
    double operator()(const ProbabilityDist::Normal& f) const {
        return f.mean + f.sd * normal_inverse_cdf(u);
    }
    double operator()(const ProbabilityDist::LogNormal& f) const {
        return std::exp(f.log_mean + f.log_sd * normal_inverse_cdf(u));
    }
    double operator()(const ProbabilityDist::TriangularPdf& f) const {
        const double span = f.b - f.a;
        const double cut = (f.mode - f.a) / span;
        if (u <= cut) return f.a + std::sqrt(u * span * (f.mode - f.a));
        return f.b - std::sqrt((1.0 - u) * span * (f.b - f.mode));
    }
    double operator()(const ProbabilityDist::Empirical& f) const {
        const std::size_t n = f.values.size();
        const std::size_t k =
            static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
        return f.values[std::min(std::max<std::size_t>(k, 1), n) - 1];
    }
};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw ValidationError(std::string(what) + " must be finite");
}

} // namespace

ProbabilityDist ProbabilityDist::uniform(double lo, double hi) {
    check_finite(lo, "uniform lo");
    check_finite(hi, "uniform hi");
    if (!(lo < hi)) throw ValidationError("uniform: need lo < hi");
    return ProbabilityDist(Uniform{lo, hi});
}

ProbabilityDist ProbabilityDist::normal(double mean, double sd) {
    check_finite(mean, "normal mean");
    check_finite(sd, "normal sd");
    if (!(sd > 0.0)) throw ValidationError("normal: need sd > 0");
    return ProbabilityDist(Normal{mean, sd});
}

ProbabilityDist ProbabilityDist::lognormal(double log_mean, double log_sd) {
    check_finite(log_mean, "lognormal log_mean");
    check_finite(log_sd, "lognormal log_sd");
    if (!(log_sd > 0.0)) throw ValidationError("lognormal: need log_sd > 0");
    return ProbabilityDist(LogNormal{log_mean, log_sd});
}

ProbabilityDist ProbabilityDist::triangular_pdf(double a, double mode, double b) {
    check_finite(a, "triangular a");
    check_finite(mode, "triangular mode");
    check_finite(b, "triangular b");
    if (!(a <= mode && mode <= b) || !(a < b))
        throw ValidationError("triangular pdf: need a <= mode <= b and a < b");
    return ProbabilityDist(TriangularPdf{a, mode, b});
}

ProbabilityDist ProbabilityDist::empirical(std::vector<double> values) {
    if (values.empty()) throw ValidationError("empirical: need at least one value");
    for (double v : values) check_finite(v, "empirical value");
    std::sort(values.begin(), values.end());
    return ProbabilityDist(Empirical{std::move(values)});
}

double ProbabilityDist::inverse_cdf(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("inverse_cdf: u must lie in (0,1), got " + std::to_string(u));
    return std::visit(InverseCdfVisitor{u}, family_);
}

std::vector<double> sample(const ProbabilityDist& dist, RngStream& stream, std::size_t n) {
    if (n == 0) throw ValidationError("sample: need n >= 1");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(dist.inverse_cdf(stream.next_uniform()));
    return out;
}

// ---------------------------------------------------------------------------
// Rank correlation (Iman-Conover)

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix make_matrix(std::size_t r, std::size_t c) {
    return Matrix(r, std::vector<double>(c, 0.0));
}

// A = L diag(d) L^T with L unit lower triangular. Fails (returns false)
// when A has an eigenvalue below -tol; pivots within tol of zero are
// flattened so exactly semi-definite targets pass.
bool ldlt_psd(const Matrix& a, Matrix& l, std::vector<double>& d, double tol) {
    const std::size_t k = a.size();
    l = make_matrix(k, k);
    d.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double dj = a[j][j];
        for (std::size_t s = 0; s < j; ++s) dj -= l[j][s] * l[j][s] * d[s];
        if (dj < -tol) return false;
        l[j][j] = 1.0;
        if (dj <= tol) {
            // a zero pivot is only semi-definite if the rest of the
            // column is zero too
            d[j] = 0.0;
            for (std::size_t i = j + 1; i < k; ++i) {
                double v = a[i][j];
                for (std::size_t s = 0; s < j; ++s) v -= l[i][s] * l[j][s] * d[s];
                if (std::abs(v) > tol) return false;
            }
            continue;
        }
        d[j] = dj;
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = a[i][j];
            for (std::size_t s = 0; s < j; ++s) v -= l[i][s] * l[j][s] * d[s];
            l[i][j] = v / dj;
        }
    }
    return true;
}

// Lower-triangular factor P with A = P P^T (PSD-tolerant).
Matrix psd_factor(const Matrix& a, double tol) {
    Matrix l;
    std::vector<double> d;
    if (!ldlt_psd(a, l, d, tol))
        throw ValidationError("correlation matrix is not positive semi-definite");
    const std::size_t k = a.size();
    Matrix p = make_matrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) p[i][j] = l[i][j] * std::sqrt(d[j]);
    return p;
}

// Inverse of a lower-triangular matrix with non-zero diagonal.
Matrix invert_lower(const Matrix& q) {
    const std::size_t k = q.size();
    Matrix r = make_matrix(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        r[j][j] = 1.0 / q[j][j];
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = 0.0;
            for (std::size_t m = j; m < i; ++m) s += q[i][m] * r[m][j];
            r[i][j] = -s / q[i][i];
        }
    }
    return r;
}

Matrix pearson_correlation(const Matrix& cols) {
    const std::size_t k = cols.size();
    const std::size_t n = cols[0].size();
    std::vector<double> mean(k, 0.0), sd(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        mean[j] = std::accumulate(cols[j].begin(), cols[j].end(), 0.0) / double(n);
        double ss = 0.0;
        for (double v : cols[j]) ss += (v - mean[j]) * (v - mean[j]);
        sd[j] = std::sqrt(ss / double(n));
    }
    Matrix c = make_matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        c[i][i] = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += (cols[i][r] - mean[i]) * (cols[j][r] - mean[j]);
            c[i][j] = c[j][i] = s / (double(n) * sd[i] * sd[j]);
        }
    }
    return c;
}

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

} // namespace

RankCorrelationSpec::RankCorrelationSpec(std::vector<std::vector<double>> spearman)
    : matrix_(std::move(spearman)) {
    const std::size_t k = matrix_.size();
    if (k == 0) throw ValidationError("correlation matrix is empty");
    for (std::size_t i = 0; i < k; ++i) {
        if (matrix_[i].size() != k)
            throw ValidationError("correlation matrix must be square");
        if (std::abs(matrix_[i][i] - 1.0) > 1e-12)
            throw ValidationError("correlation matrix needs a unit diagonal");
        for (std::size_t j = 0; j < k; ++j) {
            const double v = matrix_[i][j];
            if (!std::isfinite(v) || v < -1.0 || v > 1.0)
                throw ValidationError("correlation entries must lie in [-1,1]");
            if (std::abs(v - matrix_[j][i]) > 1e-12)
                throw ValidationError("correlation matrix must be symmetric");
        }
    }
    Matrix l;
    std::vector<double> d;
    if (!ldlt_psd(matrix_, l, d, 1e-9))
        throw ValidationError("correlation matrix is not positive semi-definite");
}

std::vector<std::vector<double>> induce_rank_correlation(
    const std::vector<std::vector<double>>& columns, const RankCorrelationSpec& spec,
    RngStream& stream) {
    const std::size_t k = columns.size();
    if (k != spec.dimension())
        throw ValidationError("correlation matrix dimension does not match column count");
    const std::size_t n = columns.empty() ? 0 : columns[0].size();
    for (const auto& col : columns)
        if (col.size() != n) throw ValidationError("columns must have equal length");
    if (n < k + 1)
        throw ValidationError("rank correlation needs at least K+1 rows, got " +
                              std::to_string(n));

    // van der Waerden scores, randomly permuted per column
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i)
        scores[i] = normal_inverse_cdf(double(i + 1) / double(n + 1));
    Matrix s(k, scores);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(s[j][i], s[j][stream.next_below(i + 1)]);

    // transform A = P Q^{-1} maps the scores' correlation Q Q^T onto the
    // target P P^T
    const Matrix p = psd_factor(spec.matrix(), 1e-9);
    Matrix t = pearson_correlation(s);
    Matrix q;
    {
        // the score correlation is PD for n > K apart from degenerate
        // permutations; jitter the diagonal if one slips through
        std::vector<double> d;
        auto factorable = [&] {
            return ldlt_psd(t, q, d, 0.0) &&
                   *std::min_element(d.begin(), d.end()) > 0.0;
        };
        for (double jitter = 1e-12; !factorable(); jitter *= 1e4) {
            if (jitter > 1e-4)
                throw ValidationError("score correlation matrix is singular");
            for (std::size_t i = 0; i < k; ++i) t[i][i] += jitter;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= i; ++j) q[i][j] *= std::sqrt(d[j]);
    }
    const Matrix qinv = invert_lower(q);
    Matrix a = make_matrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t m = 0; m < k; ++m) a[i][j] += p[i][m] * qinv[m][j];

    // reorder each data column to carry the ranks of the transformed scores
    std::vector<std::vector<double>> out(k, std::vector<double>(n, 0.0));
    std::vector<double> mixed(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            double v = 0.0;
            for (std::size_t m = 0; m < k; ++m) v += a[j][m] * s[m][r];
            mixed[r] = v;
        }
        std::vector<double> sorted_col = columns[j];
        std::sort(sorted_col.begin(), sorted_col.end());
        const auto order = ascending_order(mixed);
        for (std::size_t r = 0; r < n; ++r) out[j][order[r]] = sorted_col[r];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Step functions

StepFunction::StepFunction(std::vector<double> xs, std::vector<double> values)
    : xs_(std::move(xs)), values_(std::move(values)) {
    if (xs_.empty() || xs_.size() != values_.size())
        throw ValidationError("step function needs matching, non-empty jump lists");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(values_[i]))
            throw ValidationError("step function entries must be finite");
        if (i > 0 && !(xs_[i] > xs_[i - 1]))
            throw ValidationError("step function jumps must strictly increase");
        if (i > 0 && values_[i] < values_[i - 1])
            throw ValidationError("step function values must be non-decreasing");
    }
}

double StepFunction::operator()(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0.0;
    return values_[static_cast<std::size_t>(it - xs_.begin()) - 1];
}

StepFunction empirical_cdf(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("empirical_cdf: need at least one value");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<double> xs, fs;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue; // ties: one jump
        xs.push_back(sorted[i]);
        fs.push_back(static_cast<double>(i + 1) / n);
    }
    return StepFunction(std::move(xs), std::move(fs));
}

StepFunction step_mean(const std::vector<StepFunction>& parts) {
    if (parts.empty()) throw ValidationError("step_mean: need at least one function");
    // mean of step functions = step function whose jump heights are the
    // averaged component jump heights
    std::vector<std::pair<double, double>> deltas;
    for (const auto& f : parts) {
        double prev = 0.0;
        for (std::size_t i = 0; i < f.xs().size(); ++i) {
            deltas.emplace_back(f.xs()[i], (f.values()[i] - prev) / double(parts.size()));
            prev = f.values()[i];
        }
    }
    std::sort(deltas.begin(), deltas.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> xs, fs;
    double acc = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        acc += deltas[i].second;
        if (i + 1 < deltas.size() && deltas[i + 1].first == deltas[i].first) continue;
        xs.push_back(deltas[i].first);
        fs.push_back(acc);
    }
    return StepFunction(std::move(xs), std::move(fs));
}

double sup_distance(const StepFunction& a, const StepFunction& b) {
    std::vector<double> xs;
    xs.reserve(a.xs().size() + b.xs().size());
    xs.insert(xs.end(), a.xs().begin(), a.xs().end());
    xs.insert(xs.end(), b.xs().begin(), b.xs().end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double d = 0.0;
    for (double x : xs) d = std::max(d, std::abs(a(x) - b(x)));
    return d;
}

} // namespace rafu
