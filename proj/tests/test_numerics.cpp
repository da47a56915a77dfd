#include "oracles.hpp"
#include "probitfuse/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace probitfuse;

namespace {

double arcsin_bvn(double rho) { return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi); }

double trivariate_orthant(double rho) { return 0.125 + 3.0 * std::asin(rho) / (4.0 * std::numbers::pi); }

OrthantSpec all_above(std::size_t n, double accuracy = 1e-3) {
    return {std::vector<double>(n, 0.0), std::vector<Side>(n, Side::Above), accuracy};
}

} // namespace

// ------------------------------------------------------------------ cdf

TEST(StdNormalCdf, ZeroIsHalf) { EXPECT_DOUBLE_EQ(std_normal_cdf(0.0), 0.5); }

TEST(StdNormalCdf, SymmetryIdentity) {
    for (double x = -8.0; x <= 8.0; x += 0.37) EXPECT_NEAR(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, 1e-15);
}

TEST(StdNormalCdf, MatchesSeriesOracleAt1959964) {
    EXPECT_NEAR(std_normal_cdf(1.959964), oracle::phi_series(1.959964), 1e-10);
    EXPECT_NEAR(std_normal_cdf(1.959964), 0.975, 1e-6);
}

TEST(StdNormalCdf, MatchesSeriesOracleOnGrid) {
    for (double x = -8.0; x <= 8.0; x += 0.05) EXPECT_NEAR(std_normal_cdf(x), oracle::phi_series(x), 1e-10) << x;
}

TEST(StdNormalCdf, StrictlyIncreasing) {
    double prev = std_normal_cdf(-8.0);
    for (double x = -7.9; x <= 8.0; x += 0.1) {
        const double v = std_normal_cdf(x);
        EXPECT_GT(v, prev) << x;
        prev = v;
    }
}

// ------------------------------------------------------------- quantile

TEST(StdNormalQuantile, MedianIsZero) { EXPECT_NEAR(std_normal_quantile(0.5), 0.0, 1e-15); }

TEST(StdNormalQuantile, BisectionOracleAt0975) {
    EXPECT_NEAR(std_normal_quantile(0.975), oracle::quantile_bisect(0.975), 1e-9);
    EXPECT_NEAR(std_normal_quantile(0.975), 1.959964, 1e-6);
}

TEST(StdNormalQuantile, RoundtripFromX) {
    for (double x = -5.0; x <= 5.0; x += 0.25) EXPECT_NEAR(std_normal_quantile(std_normal_cdf(x)), x, 1e-8) << x;
}

TEST(StdNormalQuantile, InverseOfCdfOverWideRange) {
    for (double e = -12.0; e <= -0.31; e += 0.25) {
        const double p = std::pow(10.0, e);
        EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-9 * std::max(p, 1e-3)) << p;
        EXPECT_NEAR(std_normal_cdf(std_normal_quantile(1.0 - p)), 1.0 - p, 1e-9) << p;
    }
}

TEST(StdNormalQuantile, StrictlyIncreasing) {
    double prev = std_normal_quantile(1e-12);
    for (double p = 0.001; p < 1.0; p += 0.001) {
        const double v = std_normal_quantile(p);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(StdNormalQuantile, RejectsOutOfRange) {
    EXPECT_THROW(std_normal_quantile(0.0), DomainError);
    EXPECT_THROW(std_normal_quantile(1.0), DomainError);
    EXPECT_THROW(std_normal_quantile(-0.1), DomainError);
    EXPECT_THROW(std_normal_quantile(std::nan("")), DomainError);
}

// ------------------------------------------------------------------ bvn

TEST(BvnCdf, IndependenceFactorises) {
    for (double h : {-1.5, 0.0, 0.7}) {
        for (double k : {-0.3, 1.2}) EXPECT_NEAR(bvn_cdf(h, k, 0.0), std_normal_cdf(h) * std_normal_cdf(k), 1e-12);
    }
}

TEST(BvnCdf, ComonotoneLimit) {
    for (double h : {-1.0, 0.2, 1.3}) {
        for (double k : {-0.4, 0.9}) EXPECT_NEAR(bvn_cdf(h, k, 1.0), std::min(std_normal_cdf(h), std_normal_cdf(k)), 1e-12);
    }
}

TEST(BvnCdf, CounterMonotoneLimit) {
    EXPECT_NEAR(bvn_cdf(0.5, 0.3, -1.0), std::max(0.0, std_normal_cdf(0.5) + std_normal_cdf(0.3) - 1.0), 1e-12);
}

TEST(BvnCdf, OneThirdAtHalfCorrelation) {
    EXPECT_NEAR(bvn_cdf(0.0, 0.0, 0.5), 1.0 / 3.0, 1e-7);
    EXPECT_NEAR(oracle::bvn_simpson(0.0, 0.0, 0.5), 1.0 / 3.0, 1e-9);
}

TEST(BvnCdf, ArcsinIdentity) {
    for (double rho = -0.99; rho < 1.0; rho += 0.03) EXPECT_NEAR(bvn_cdf(0.0, 0.0, rho), arcsin_bvn(rho), 1e-6) << rho;
}

TEST(BvnCdf, QuadratureOracleGrid) {
    for (double h : {-2.5, -0.8, 0.0, 0.6, 2.1}) {
        for (double k : {-1.7, 0.3, 1.4}) {
            for (double rho : {-0.95, -0.5, -0.1, 0.2, 0.7, 0.93}) {
                EXPECT_NEAR(bvn_cdf(h, k, rho), oracle::bvn_simpson(h, k, rho), 1e-7) << h << ' ' << k << ' ' << rho;
            }
        }
    }
}

TEST(BvnCdf, InfiniteArguments) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_DOUBLE_EQ(bvn_cdf(-inf, 0.3, 0.4), 0.0);
    EXPECT_NEAR(bvn_cdf(inf, 0.3, 0.4), std_normal_cdf(0.3), 1e-15);
    EXPECT_NEAR(bvn_cdf(0.3, inf, -0.4), std_normal_cdf(0.3), 1e-15);
}

TEST(BvnCdf, RejectsCorrelationOutsideUnitInterval) { EXPECT_THROW(bvn_cdf(0.0, 0.0, 1.1), DomainError); }

// ---------------------------------------------------- correlation matrix

TEST(CorrelationMatrix, ValidatesInput) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.3, 0.31, 1.0;
    EXPECT_THROW(CorrelationMatrix{m}, DomainError);
    m << 0.9, 0.3, 0.3, 1.0;
    EXPECT_THROW(CorrelationMatrix{m}, DomainError);
    m << 1.0, 1.3, 1.3, 1.0;
    EXPECT_THROW(CorrelationMatrix{m}, DomainError);
    m << 1.0, -0.3, -0.3, 1.0;
    EXPECT_NO_THROW(CorrelationMatrix{m});
}

TEST(CorrelationMatrix, RestrictedAndClamped) {
    const auto c = CorrelationMatrix::equicorrelated(4, 1.0);
    const std::vector<std::size_t> keep{0, 2};
    const auto r = c.restricted(keep);
    EXPECT_EQ(r.dim(), 2u);
    EXPECT_DOUBLE_EQ(r.clamped()(0, 1), 0.999);
    EXPECT_DOUBLE_EQ(r.clamped()(0, 0), 1.0);
}

// ------------------------------------------------------------- cholesky

TEST(Cholesky, IdentityIsIdentity) {
    const auto l = cholesky_lower(CorrelationMatrix(3));
    EXPECT_TRUE(l.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-15));
}

TEST(Cholesky, TwoByTwo) {
    const auto l = cholesky_lower(CorrelationMatrix::equicorrelated(2, 0.6));
    EXPECT_NEAR(l(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(l(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(l(1, 0), 0.6, 1e-15);
    EXPECT_NEAR(l(1, 1), 0.8, 1e-15);
}

TEST(Cholesky, MultiplyBackReconstructs) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::MatrixXd c = oracle::random_correlation(5, rng);
        const auto l = cholesky_lower(CorrelationMatrix(c));
        EXPECT_LT((l * l.transpose() - c).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_TRUE(l.isLowerTriangular());
    }
}

TEST(Cholesky, RejectsNonPositiveDefinite) {
    EXPECT_THROW(cholesky_lower(CorrelationMatrix::equicorrelated(3, -0.9)), FactorizationError);
    EXPECT_THROW(cholesky_lower(CorrelationMatrix::equicorrelated(3, 1.0)), FactorizationError);
}

// ------------------------------------------------ nearest correlation

TEST(NearestCorrelation, IdempotentOnPsdInput) {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd c = oracle::random_correlation(4, rng);
    const auto out = nearest_correlation(c);
    EXPECT_LT((out.matrix() - c).cwiseAbs().maxCoeff(), 1e-12);
    const auto twice = nearest_correlation(out);
    EXPECT_LT((twice.matrix() - out.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NearestCorrelation, RepairsNegativeEquicorrelation) {
    const Eigen::MatrixXd bad = CorrelationMatrix::equicorrelated(3, -0.9).matrix();
    ASSERT_LT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(bad).eigenvalues().minCoeff(), 0.0);
    const auto out = nearest_correlation(bad);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.matrix()).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-10);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(out(i, i), 1.0);
    EXPECT_NO_THROW(cholesky_lower(out));
}

TEST(NearestCorrelation, IdentityUnchanged) {
    const auto out = nearest_correlation(CorrelationMatrix(5));
    EXPECT_TRUE(out.matrix().isApprox(Eigen::MatrixXd::Identity(5, 5), 1e-12));
}

TEST(NearestCorrelation, RejectsAsymmetric) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.2, 0.4, 1.0;
    EXPECT_THROW(nearest_correlation(m), DomainError);
}

// ---------------------------------------------------------------- orthant

TEST(Orthant, UnivariateReduction) {
    const OrthantSpec spec{{0.7}, {Side::Above}, 1e-3};
    EXPECT_NEAR(mvn_orthant_prob(spec, CorrelationMatrix(1), 1), 1.0 - std_normal_cdf(0.7), 1e-15);
}

TEST(Orthant, IdentityFactorises) {
    const OrthantSpec spec{{0.3, -0.5, 1.1, 0.0}, {Side::Above, Side::Below, Side::Above, Side::Below}, 1e-4};
    const double expected = (1.0 - std_normal_cdf(0.3)) * std_normal_cdf(-0.5) * (1.0 - std_normal_cdf(1.1)) * 0.5;
    EXPECT_NEAR(mvn_orthant_prob(spec, CorrelationMatrix(4), 3), expected, 1e-4);
}

TEST(Orthant, TrivariateClosedForm) {
    const double exact = trivariate_orthant(0.5);
    EXPECT_NEAR(exact, 0.25, 1e-15);
    EXPECT_NEAR(mvn_orthant_prob(all_above(3), CorrelationMatrix::equicorrelated(3, 0.5), 9), exact, 1e-3);
}

TEST(Orthant, TrivariatePlainMonteCarloCrossCheck) {
    // 2e6 samples keep the oracle's standard error near 3e-4.
    const Eigen::MatrixXd c = CorrelationMatrix::equicorrelated(3, 0.5).matrix();
    const double mc = oracle::orthant_mc(c, {0.0, 0.0, 0.0}, {true, true, true}, 2'000'000, 42);
    EXPECT_NEAR(mc, 0.25, 1.5e-3);
}

TEST(Orthant, BivariateMatchesBvn) {
    const OrthantSpec spec{{0.4, -0.2}, {Side::Above, Side::Below}, 1e-3};
    const auto c = CorrelationMatrix::equicorrelated(2, 0.35);
    // P(X > 0.4, Y <= -0.2) = P(-X < -0.4, Y <= -0.2) with corr(-X, Y) = -0.35.
    EXPECT_NEAR(mvn_orthant_prob(spec, c, 0), bvn_cdf(-0.4, -0.2, -0.35), 1e-14);
}

TEST(Orthant, SixDimensionalMatchesMonteCarlo) {
    std::mt19937_64 rng(77);
    const Eigen::MatrixXd c = oracle::random_correlation(6, rng);
    const std::vector<double> t{0.2, -0.4, 0.9, 0.0, -1.1, 0.5};
    const std::vector<bool> above{true, false, true, true, false, false};
    OrthantSpec spec{t, {}, 1e-3};
    for (bool a : above) spec.sides.push_back(a ? Side::Above : Side::Below);
    const double mc = oracle::orthant_mc(c, t, above, 1'000'000, 8);
    EXPECT_NEAR(mvn_orthant_prob(spec, CorrelationMatrix(c), 4), mc, 2.5e-3);
}

TEST(Orthant, SignPatternsSumToOne) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> normal;
    const Eigen::MatrixXd c = oracle::random_correlation(4, rng);
    std::vector<double> t(4);
    for (auto& v : t) v = normal(rng);
    double total = 0.0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        OrthantSpec spec{t, {}, 1e-3};
        for (unsigned j = 0; j < 4; ++j) spec.sides.push_back((mask >> j) & 1u ? Side::Above : Side::Below);
        total += mvn_orthant_prob(spec, CorrelationMatrix(c), mask);
    }
    EXPECT_NEAR(total, 1.0, 16 * 1e-3);
}

TEST(Orthant, DeterministicForSeed) {
    const auto c = CorrelationMatrix::equicorrelated(5, 0.3);
    const OrthantSpec spec{{0.1, 0.2, -0.3, 0.4, 0.5}, std::vector<Side>(5, Side::Below), 1e-3};
    EXPECT_EQ(mvn_orthant_prob(spec, c, 123), mvn_orthant_prob(spec, c, 123));
}

TEST(Orthant, TighterAccuracyIsHonoured) {
    const double exact = trivariate_orthant(0.2);
    EXPECT_NEAR(mvn_orthant_prob(all_above(3, 1e-5), CorrelationMatrix::equicorrelated(3, 0.2), 1), exact, 1e-5);
}

TEST(Orthant, NonPositiveDefiniteNamesRepair) {
    try {
        (void)mvn_orthant_prob(all_above(3), CorrelationMatrix::equicorrelated(3, -0.9), 0);
        FAIL() << "expected FactorizationError";
    } catch (const FactorizationError& e) {
        EXPECT_NE(std::string(e.what()).find("nearest_correlation"), std::string::npos);
    }
}

TEST(Orthant, DimensionMismatchIsDomainError) {
    EXPECT_THROW((void)mvn_orthant_prob(all_above(3), CorrelationMatrix(4), 0), DomainError);
    OrthantSpec spec = all_above(3);
    spec.sides.pop_back();
    EXPECT_THROW((void)mvn_orthant_prob(spec, CorrelationMatrix(3), 0), DomainError);
    EXPECT_THROW((void)mvn_orthant_prob(all_above(17), CorrelationMatrix(17), 0), DomainError);
}

TEST(Orthant, RejectsNonFiniteThreshold) {
    OrthantSpec spec = all_above(3);
    spec.thresholds[1] = std::numeric_limits<double>::infinity();
    EXPECT_THROW((void)mvn_orthant_prob(spec, CorrelationMatrix(3), 0), DomainError);
}
