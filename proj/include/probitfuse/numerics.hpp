#pragma once
// Normal probabilities (univariate, bivariate, multivariate orthants) and the
// small dense kernels they need: Cholesky and correlation-matrix repair.

#include "probitfuse/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace probitfuse {

inline constexpr double kCorrelationClamp = 0.999;
inline constexpr double kEigenFloor = 1e-6;
inline constexpr std::size_t kMaxOrthantDim = 16;

// Phi(x). erfc keeps full relative precision in the lower tail.
inline double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double std_normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {

template <std::size_t N>
double rational(const std::array<double, N>& num, const std::array<double, N>& den, double x) noexcept {
    double u = num[N - 1];
    double v = den[N - 1];
    for (std::size_t i = N - 1; i > 0; --i) {
        u = x * u + num[i - 1];
        v = x * v + den[i - 1];
    }
    return u / v;
}

// Wichura's AS241 (PPND16); relative error about 1e-16 over (0, 1).
inline double as241(double p) noexcept {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        static constexpr std::array<double, 8> a{3.387132872796366608,  133.14166789178437745,
                                                 1971.5909503065514427, 13731.693765509461125,
                                                 45921.953931549871457, 67265.770927008700853,
                                                 33430.575583588128105, 2509.0809287301226727};
        static constexpr std::array<double, 8> b{1.0,
                                                 42.313330701600911252,
                                                 687.1870074920579083,
                                                 5394.1960214247511077,
                                                 21213.794301586595867,
                                                 39307.89580009271061,
                                                 28729.085735721942674,
                                                 5226.495278852854561};
        return q * rational(a, b, 0.180625 - q * q);
    }
    const double tail = q < 0.0 ? p : 1.0 - p;
    const double r = std::sqrt(-std::log(tail));
    double x;
    if (r <= 5.0) {
        static constexpr std::array<double, 8> c{1.42343711074968357734,   4.6303378461565452959,
                                                 5.7694972214606914055,    3.64784832476320460504,
                                                 1.27045825245236838258,   0.24178072517745061177,
                                                 0.0227238449892691845833, 7.7454501427834140764e-4};
        static constexpr std::array<double, 8> d{1.0,
                                                 2.05319162663775882187,
                                                 1.6763848301838038494,
                                                 0.68976733498510000455,
                                                 0.14810397642748007459,
                                                 0.0151986665636164571966,
                                                 5.475938084995344946e-4,
                                                 1.05075007164441684324e-9};
        x = rational(c, d, r - 1.6);
    } else {
        static constexpr std::array<double, 8> e{6.6579046435011037772,     5.4637849111641143699,
                                                 1.7848265399172913358,     0.29656057182850489123,
                                                 0.026532189526576123093,   0.0012426609473880784386,
                                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
        static constexpr std::array<double, 8> f{1.0,
                                                 0.59983220655588793769,
                                                 0.13692988092273580531,
                                                 0.0148753612908506148525,
                                                 7.868691311456132591e-4,
                                                 1.8463183175100546818e-5,
                                                 1.4215117583164458887e-7,
                                                 2.04426310338993978564e-15};
        x = rational(e, f, r - 5.0);
    }
    return q < 0.0 ? -x : x;
}

// Quantile without the domain check; saturates at +/-inf for p outside (0, 1).
inline double quantile_unchecked(double p) noexcept {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return as241(p);
}

} // namespace detail

// Phi^{-1}(p): AS241 refined by one Newton step against std_normal_cdf.
inline double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
    }
    double x = detail::as241(p);
    const double density = std_normal_pdf(x);
    if (density > 0.0) {
        // Work in the tail nearest to p so the residual keeps its precision.
        const double residual = p < 0.5 ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_cdf(-x);
        const double step = p < 0.5 ? residual / density : -residual / density;
        if (std::isfinite(step)) x -= step;
    }
    return x;
}

namespace detail {

// P(X > h, Y > k) for a standard bivariate normal with correlation r
// (Drezner-Wesolowsky as reworked by Genz, double precision).
inline double bvn_upper(double h, double k, double r) noexcept {
    static constexpr std::array<std::array<double, 10>, 3> x{{
        {-0.9324695142031522, -0.6612093864662647, -0.2386191860831970},
        {-0.9815606342467191, -0.9041172563704750, -0.7699026741943050, -0.5873179542866171,
         -0.3678314989981802, -0.1252334085114692},
        {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
         -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154196,
         -0.2277858511416451, -0.7652652113349733e-1},
    }};
    static constexpr std::array<std::array<double, 10>, 3> w{{
        {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
        {0.4717533638651177e-1, 0.1069393259953183, 0.1600783285433464, 0.2031674267230659,
         0.2334925365383547, 0.2491470458134029},
        {0.1761400713915212e-1, 0.4060142980038694e-1, 0.6267204833410906e-1, 0.8327674157670475e-1,
         0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
         0.1491729864726037, 0.1527533871307259},
    }};
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::size_t grid;
    std::size_t points;
    if (std::fabs(r) < 0.3) {
        grid = 0;
        points = 3;
    } else if (std::fabs(r) < 0.75) {
        grid = 1;
        points = 6;
    } else {
        grid = 2;
        points = 10;
    }

    double hk = h * k;
    double bvn = 0.0;
    if (std::fabs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (std::size_t i = 0; i < points; ++i) {
            double sn = std::sin(asr * (x[grid][i] + 1.0) / 2.0);
            bvn += w[grid][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (1.0 - x[grid][i]) / 2.0);
            bvn += w[grid][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * two_pi) + std_normal_cdf(-h) * std_normal_cdf(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::fabs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 16.0;
        bvn = a * std::exp(-(bs / as + hk) / 2.0) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (hk > -160.0) {
            const double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2.0) * std::sqrt(two_pi) * std_normal_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (std::size_t i = 0; i < points; ++i) {
            double xs = a * (x[grid][i] + 1.0);
            xs *= xs;
            double rs = std::sqrt(1.0 - xs);
            bvn += a * w[grid][i] *
                   (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
                    std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
            xs = as * (1.0 - x[grid][i]) * (1.0 - x[grid][i]) / 4.0;
            rs = std::sqrt(1.0 - xs);
            bvn += a * w[grid][i] * std::exp(-(bs / xs + hk) / 2.0) *
                   (std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs -
                    (1.0 + c * xs * (1.0 + d * xs)));
        }
        bvn = -bvn / two_pi;
    }
    if (r > 0.0) return bvn + std_normal_cdf(-std::max(h, k));
    bvn = -bvn;
    if (k > h) {
        bvn += h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h) : std_normal_cdf(-h) - std_normal_cdf(-k);
    }
    return bvn;
}

} // namespace detail

// P(Z1 <= h, Z2 <= k) for a standard bivariate normal with correlation rho.
inline double bvn_cdf(double h, double k, double rho) {
    if (!(std::fabs(rho) <= 1.0)) {
        throw DomainError("bvn_cdf: |rho| must be at most 1, got " + std::to_string(rho));
    }
    if (h == -std::numeric_limits<double>::infinity() || k == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (h == std::numeric_limits<double>::infinity()) return std_normal_cdf(k);
    if (k == std::numeric_limits<double>::infinity()) return std_normal_cdf(h);
    return std::clamp(detail::bvn_upper(-h, -k, rho), 0.0, 1.0);
}

// Symmetric matrix with unit diagonal and entries in [-1, 1]. Positive
// semi-definiteness is not enforced here; see nearest_correlation.
class CorrelationMatrix {
public:
    CorrelationMatrix() : CorrelationMatrix(1) {}
    explicit CorrelationMatrix(std::size_t dim) : m_(Eigen::MatrixXd::Identity(checked_dim(dim), checked_dim(dim))) {}

    explicit CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
        if (m_.rows() == 0 || m_.rows() != m_.cols()) {
            throw DomainError("correlation matrix must be square and nonempty");
        }
        for (Eigen::Index i = 0; i < m_.rows(); ++i) {
            if (m_(i, i) != 1.0) throw DomainError("correlation matrix diagonal must be exactly 1");
            for (Eigen::Index j = 0; j < i; ++j) {
                if (!std::isfinite(m_(i, j)) || std::fabs(m_(i, j) - m_(j, i)) > 1e-12) {
                    throw DomainError("correlation matrix must be symmetric");
                }
                if (std::fabs(m_(i, j)) > 1.0) throw DomainError("correlation entries must lie in [-1, 1]");
                m_(j, i) = m_(i, j);
            }
        }
    }

    static CorrelationMatrix equicorrelated(std::size_t dim, double rho) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Constant(checked_dim(dim), checked_dim(dim), rho);
        m.diagonal().setOnes();
        return CorrelationMatrix(std::move(m));
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(idx(i), idx(j)); }

    void set(std::size_t i, std::size_t j, double value) {
        if (i == j) {
            if (value != 1.0) throw DomainError("correlation matrix diagonal must be exactly 1");
            return;
        }
        if (!(std::fabs(value) <= 1.0)) throw DomainError("correlation entries must lie in [-1, 1]");
        m_(idx(i), idx(j)) = value;
        m_(idx(j), idx(i)) = value;
    }

    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    // Sub-matrix over the given coordinates, in the given order.
    CorrelationMatrix restricted(std::span<const std::size_t> keep) const {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            for (std::size_t b = 0; b < keep.size(); ++b) out(idx(a), idx(b)) = (*this)(keep[a], keep[b]);
        }
        return CorrelationMatrix(std::move(out));
    }

    // Off-diagonal entries pulled into [-limit, limit].
    CorrelationMatrix clamped(double limit = kCorrelationClamp) const {
        CorrelationMatrix out = *this;
        for (Eigen::Index i = 0; i < m_.rows(); ++i) {
            for (Eigen::Index j = 0; j < m_.cols(); ++j) {
                if (i != j) out.m_(i, j) = std::clamp(m_(i, j), -limit, limit);
            }
        }
        return out;
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    friend bool operator==(const CorrelationMatrix& a, const CorrelationMatrix& b) { return a.m_ == b.m_; }

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
    static Eigen::Index checked_dim(std::size_t dim) {
        if (dim == 0) throw DomainError("correlation matrix dimension must be positive");
        return static_cast<Eigen::Index>(dim);
    }

    Eigen::MatrixXd m_;
};

// Lower-triangular L with L * L^T == corr. Throws FactorizationError unless
// corr is positive definite.
inline Eigen::MatrixXd cholesky_lower(const CorrelationMatrix& corr) {
    const auto& a = corr.matrix();
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 1e-12)) {
            throw FactorizationError("cholesky_lower: matrix is not positive definite (pivot " +
                                     std::to_string(pivot) + " at column " + std::to_string(j) +
                                     "); repair it with nearest_correlation first");
        }
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

// Eigenvalue clipping at `floor` followed by rescaling to unit diagonal.
// Matrices whose spectrum already clears the floor are returned unchanged.
inline CorrelationMatrix nearest_correlation(const Eigen::MatrixXd& matrix, double floor = kEigenFloor) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw DomainError("nearest_correlation: matrix must be square and nonempty");
    }
    Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    if ((sym - matrix).cwiseAbs().maxCoeff() > 1e-12) {
        throw DomainError("nearest_correlation: matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.eigenvalues().minCoeff() >= floor) {
        sym.diagonal().setOnes();
        return CorrelationMatrix(std::move(sym));
    }
    const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd repaired = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
    const Eigen::VectorXd scale = repaired.diagonal().cwiseSqrt().cwiseInverse();
    repaired = scale.asDiagonal() * repaired * scale.asDiagonal();
    repaired = 0.5 * (repaired + repaired.transpose());
    for (Eigen::Index i = 0; i < repaired.rows(); ++i) {
        repaired(i, i) = 1.0;
        for (Eigen::Index j = 0; j < repaired.cols(); ++j) {
            if (i != j) repaired(i, j) = std::clamp(repaired(i, j), -1.0, 1.0);
        }
    }
    return CorrelationMatrix(std::move(repaired));
}

inline CorrelationMatrix nearest_correlation(const CorrelationMatrix& corr, double floor = kEigenFloor) {
    return nearest_correlation(corr.matrix(), floor);
}

enum class Side : std::uint8_t { Below, Above };

// Signed orthant {z : z_i > t_i for Above, z_i <= t_i for Below}.
struct OrthantSpec {
    std::vector<double> thresholds;
    std::vector<Side> sides;
    double accuracy = 1e-3;
};

namespace detail {

// Richtmyer generators sqrt(prime) mod 1, one per integration coordinate.
inline constexpr std::array<double, kMaxOrthantDim> kLatticePrimes{2,  3,  5,  7,  11, 13, 17, 19,
                                                                   23, 29, 31, 37, 41, 43, 47, 53};

struct GenzProblem {
    std::vector<double> lower;
    std::vector<double> upper;
    Eigen::MatrixXd chol;
};

inline double interval_prob(double lo, double hi) noexcept {
    // Evaluate in the tail that keeps precision.
    if (lo > 0.0) return std_normal_cdf(-lo) - std_normal_cdf(-hi);
    return std_normal_cdf(hi) - std_normal_cdf(lo);
}

// Cholesky with Genz-Bretz variable prioritisation: at each step the
// remaining coordinate with the narrowest conditional interval goes first.
inline GenzProblem prioritised_cholesky(std::vector<double> lower, std::vector<double> upper, Eigen::MatrixXd cov) {
    const Eigen::Index n = cov.rows();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = i;
        double best_prob = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = i; j < n; ++j) {
            double var = cov(j, j);
            double shift = 0.0;
            for (Eigen::Index k = 0; k < i; ++k) {
                var -= l(j, k) * l(j, k);
                shift += l(j, k) * y[static_cast<std::size_t>(k)];
            }
            if (!(var > 1e-12)) continue;
            const double sd = std::sqrt(var);
            const double p = interval_prob((lower[static_cast<std::size_t>(j)] - shift) / sd,
                                           (upper[static_cast<std::size_t>(j)] - shift) / sd);
            if (p < best_prob) {
                best_prob = p;
                best = j;
            }
        }
        if (best != i) {
            cov.row(i).swap(cov.row(best));
            cov.col(i).swap(cov.col(best));
            l.row(i).swap(l.row(best));
            std::swap(lower[static_cast<std::size_t>(i)], lower[static_cast<std::size_t>(best)]);
            std::swap(upper[static_cast<std::size_t>(i)], upper[static_cast<std::size_t>(best)]);
        }
        double pivot = cov(i, i);
        double shift = 0.0;
        for (Eigen::Index k = 0; k < i; ++k) {
            pivot -= l(i, k) * l(i, k);
            shift += l(i, k) * y[static_cast<std::size_t>(k)];
        }
        if (!(pivot > 1e-12)) {
            throw FactorizationError("mvn_orthant_prob: correlation matrix is not positive definite; "
                                     "repair it with nearest_correlation first");
        }
        l(i, i) = std::sqrt(pivot);
        for (Eigen::Index r = i + 1; r < n; ++r) {
            double s = cov(r, i);
            for (Eigen::Index k = 0; k < i; ++k) s -= l(r, k) * l(i, k);
            l(r, i) = s / l(i, i);
        }
        // Conditional mean of the truncated coordinate feeds the next choice.
        const double a = (lower[static_cast<std::size_t>(i)] - shift) / l(i, i);
        const double b = (upper[static_cast<std::size_t>(i)] - shift) / l(i, i);
        const double mass = interval_prob(a, b);
        double mean;
        if (mass > 1e-300) {
            mean = (std_normal_pdf(a) - std_normal_pdf(b)) / mass;
        } else {
            mean = std::isfinite(a) ? a : (std::isfinite(b) ? b : 0.0);
        }
        y[static_cast<std::size_t>(i)] = mean;
    }
    return {std::move(lower), std::move(upper), std::move(l)};
}

// Separation-of-variables integrand at a point of [0,1)^(n-1).
inline double genz_integrand(const GenzProblem& prob, const double* w, double* y) noexcept {
    const auto n = static_cast<Eigen::Index>(prob.lower.size());
    const auto& l = prob.chol;
    double lo = std_normal_cdf(prob.lower[0] / l(0, 0));
    double hi = std_normal_cdf(prob.upper[0] / l(0, 0));
    double f = hi - lo;
    for (Eigen::Index i = 1; i < n && f > 0.0; ++i) {
        const double u = lo + w[i - 1] * (hi - lo);
        y[i - 1] = detail::quantile_unchecked(std::clamp(u, 1e-300, 1.0 - 1e-16));
        double shift = 0.0;
        for (Eigen::Index k = 0; k < i; ++k) shift += l(i, k) * y[k];
        lo = std_normal_cdf((prob.lower[static_cast<std::size_t>(i)] - shift) / l(i, i));
        hi = std_normal_cdf((prob.upper[static_cast<std::size_t>(i)] - shift) / l(i, i));
        f *= hi - lo;
    }
    return f;
}

} // namespace detail

// Probability of the signed orthant under N(0, corr). Dimensions 1 and 2 are
// exact; higher dimensions use a randomized rank-1 lattice rule over the
// Genz separation-of-variables transform, with 12 random shifts, doubling
// the lattice until three standard errors fall below spec.accuracy.
// Deterministic for a given seed.
inline double mvn_orthant_prob(const OrthantSpec& spec, const CorrelationMatrix& corr, std::uint64_t seed) {
    const std::size_t n = spec.thresholds.size();
    if (n == 0 || spec.sides.size() != n || corr.dim() != n) {
        throw DomainError("mvn_orthant_prob: thresholds, sides and correlation dimension must agree (got " +
                          std::to_string(n) + ", " + std::to_string(spec.sides.size()) + ", " +
                          std::to_string(corr.dim()) + ")");
    }
    if (n > kMaxOrthantDim) throw DomainError("mvn_orthant_prob: dimension above 16 is unsupported");
    if (!(spec.accuracy > 0.0)) throw DomainError("mvn_orthant_prob: accuracy must be positive");

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lower(n);
    std::vector<double> upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = spec.thresholds[i];
        if (!std::isfinite(t)) throw DomainError("mvn_orthant_prob: thresholds must be finite");
        if (spec.sides[i] == Side::Above) {
            lower[i] = t;
            upper[i] = inf;
        } else {
            lower[i] = -inf;
            upper[i] = t;
        }
    }

    const CorrelationMatrix clamped = corr.clamped();
    // Surface non-PD input up front, before any reordering.
    (void)cholesky_lower(clamped);

    if (n == 1) return detail::interval_prob(lower[0], upper[0]);
    if (n == 2) {
        double rho = clamped(0, 1);
        double h = spec.thresholds[0];
        double k = spec.thresholds[1];
        // Flip "above" coordinates so the region becomes a lower orthant.
        if (spec.sides[0] == Side::Above) {
            h = -h;
            rho = -rho;
        }
        if (spec.sides[1] == Side::Above) {
            k = -k;
            rho = -rho;
        }
        return bvn_cdf(h, k, rho);
    }

    const detail::GenzProblem prob = detail::prioritised_cholesky(std::move(lower), std::move(upper), clamped.matrix());

    constexpr std::size_t shifts = 12;
    constexpr std::size_t max_points = std::size_t{1} << 17;
    const std::size_t m = n - 1;
    std::array<double, kMaxOrthantDim> gen{};
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(detail::kLatticePrimes[j]);
        gen[j] = s - std::floor(s);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::array<double, kMaxOrthantDim>> offsets(shifts);
    for (auto& o : offsets) {
        for (std::size_t j = 0; j < m; ++j) o[j] = unif(rng);
    }

    std::array<double, kMaxOrthantDim> w{};
    std::array<double, kMaxOrthantDim> w_anti{};
    std::array<double, kMaxOrthantDim> y{};
    // Lattice points 1..N are a prefix of 1..2N, so each doubling only
    // evaluates the new half.
    std::array<double, shifts> acc{};
    std::size_t done = 0;
    double estimate = 0.0;
    for (std::size_t points = 128;; points *= 2) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t s = 0; s < shifts; ++s) {
            const auto& o = offsets[s];
            for (std::size_t k = done + 1; k <= points; ++k) {
                for (std::size_t j = 0; j < m; ++j) {
                    double v = static_cast<double>(k) * gen[j] + o[j];
                    v -= std::floor(v);
                    v = std::fabs(2.0 * v - 1.0);
                    w[j] = v;
                    w_anti[j] = 1.0 - v;
                }
                acc[s] += 0.5 * (detail::genz_integrand(prob, w.data(), y.data()) +
                                 detail::genz_integrand(prob, w_anti.data(), y.data()));
            }
            const double mean = acc[s] / static_cast<double>(points);
            sum += mean;
            sum_sq += mean * mean;
        }
        estimate = sum / shifts;
        const double var = std::max(0.0, (sum_sq - shifts * estimate * estimate) / (shifts - 1));
        const double err = 3.0 * std::sqrt(var / shifts);
        done = points;
        if (err <= spec.accuracy || points >= max_points) break;
    }
    return std::clamp(estimate, 0.0, 1.0);
}

} // namespace probitfuse
