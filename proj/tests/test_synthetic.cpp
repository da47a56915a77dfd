#include "helpers.hpp"
#include "probitfuse/bootstrap.hpp"
#include "probitfuse/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace probitfuse;

namespace {

CorrelationStructure filters(std::size_t n, double rho) {
    std::vector<std::string> panel;
    for (std::size_t i = 0; i < n; ++i) panel.push_back("f" + std::to_string(i));
    const auto m = CorrelationMatrix::equicorrelated(n, rho);
    return {panel, m, m};
}

double positive_fraction(const std::vector<AnnotationPattern>& rows, std::size_t col) {
    const auto hits = std::count_if(rows.begin(), rows.end(), [&](const auto& p) { return p[col] == Label::Positive; });
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

ContingencyTable pair_table(const std::vector<AnnotationPattern>& rows, std::size_t a, std::size_t b) {
    ContingencyTable t;
    for (const auto& p : rows) {
        const bool x = p[a] == Label::Positive;
        const bool y = p[b] == Label::Positive;
        (x ? (y ? t.pos_pos : t.pos_neg) : (y ? t.neg_pos : t.neg_neg)) += 1.0;
    }
    return t;
}

} // namespace

TEST(Copula, IndependentHalfPrevalence) {
    const AggregateCounts agg{"co", 1000, {{"f0", 500}, {"f1", 500}, {"f2", 500}}};
    Rng rng(1);
    const auto rows = copula_generate(agg, filters(3, 0.0), 10000, rng);
    ASSERT_EQ(rows.size(), 10000u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(positive_fraction(rows, j), 0.5, 0.015);
}

TEST(Copula, ZeroPrevalenceColumnAllNegative) {
    const AggregateCounts agg{"co", 200, {{"f0", 0}, {"f1", 40}}};
    Rng rng(2);
    const auto rows = copula_generate(agg, filters(2, 0.4), 5000, rng);
    for (const auto& p : rows) EXPECT_EQ(p[0], Label::Negative);
}

TEST(Copula, FullPrevalenceColumnAllPositive) {
    const AggregateCounts agg{"co", 200, {{"f0", 200}, {"f1", 40}}};
    Rng rng(2);
    const auto rows = copula_generate(agg, filters(2, 0.4), 2000, rng);
    for (const auto& p : rows) EXPECT_EQ(p[0], Label::Positive);
}

TEST(Copula, BothPositiveMatchesBvn) {
    const AggregateCounts agg{"co", 100, {{"f0", 50}, {"f1", 50}}};
    Rng rng(3);
    const auto rows = copula_generate(agg, filters(2, 0.5), 10000, rng);
    const auto t = pair_table(rows, 0, 1);
    EXPECT_NEAR(t.pos_pos / 10000.0, 1.0 / 3.0, 0.015);
}

TEST(Copula, MarginalsWithinThreeStandardErrors) {
    const AggregateCounts agg{"co", 1000, {{"f0", 50}, {"f1", 120}, {"f2", 300}, {"f3", 500}}};
    Rng rng(4);
    const std::size_t n = 10000;
    const auto rows = copula_generate(agg, filters(4, 0.3), n, rng);
    for (std::size_t j = 0; j < 4; ++j) {
        const double p = static_cast<double>(agg.filter_counts.at("f" + std::to_string(j))) / 1000.0;
        EXPECT_NEAR(positive_fraction(rows, j), p, 3.0 * std::sqrt(p * (1.0 - p) / n)) << j;
    }
}

TEST(Copula, TetrachoricRecoversRestrictedCorrelation) {
    const AggregateCounts agg{"co", 1000, {{"f0", 80}, {"f1", 300}, {"f2", 900}}};
    Rng rng(5);
    const auto rows = copula_generate(agg, filters(3, 0.45), 10000, rng);
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) EXPECT_NEAR(tetrachoric(pair_table(rows, a, b)), 0.45, 0.1);
    }
}

TEST(Copula, UnavailableAnnotatorsMissing) {
    const auto profiles = fixtures::default_profiles();
    const auto s = fixtures::equicorrelated(profiles, 0.3);
    const AggregateCounts agg{"co", 400, {{"broad", 120}, {"combined", 40}}};
    Rng rng(6);
    const auto rows = copula_generate(agg, s, 300, rng);
    for (const auto& p : rows) {
        EXPECT_NE(p[0], Label::Missing);
        EXPECT_EQ(p[1], Label::Missing);
        EXPECT_NE(p[2], Label::Missing);
        for (std::size_t j = 3; j < 6; ++j) EXPECT_EQ(p[j], Label::Missing);
    }
}

TEST(Copula, UsesNonExpertMatrix) {
    const AggregateCounts agg{"co", 100, {{"f0", 50}, {"f1", 50}}};
    const CorrelationStructure s{{"f0", "f1"}, CorrelationMatrix::equicorrelated(2, -0.8),
                                 CorrelationMatrix::equicorrelated(2, 0.5)};
    Rng rng(7);
    const auto rows = copula_generate(agg, s, 10000, rng);
    EXPECT_NEAR(tetrachoric(pair_table(rows, 0, 1)), 0.5, 0.1);
}

TEST(Copula, DeterministicGivenSeed) {
    const AggregateCounts agg{"co", 1000, {{"f0", 100}, {"f1", 300}}};
    const SyntheticConfig config{0.5, 42};
    EXPECT_EQ(copula_generate(agg, filters(2, 0.3), 500, config), copula_generate(agg, filters(2, 0.3), 500, config));
    const SyntheticConfig other{0.5, 43};
    EXPECT_NE(copula_generate(agg, filters(2, 0.3), 500, config), copula_generate(agg, filters(2, 0.3), 500, other));
}

TEST(Copula, CountAboveHeadcountClampsWithWarning) {
    const AggregateCounts agg{"co", 100, {{"f0", 130}, {"f1", 10}}};
    Warnings w;
    Rng rng(8);
    const auto rows = copula_generate(agg, filters(2, 0.2), 100, rng, &w);
    EXPECT_EQ(w.size(), 1u);
    EXPECT_NE(w.snapshot().front().find("clamped"), std::string::npos);
    for (const auto& p : rows) EXPECT_EQ(p[0], Label::Positive);
}

TEST(Copula, CellCountsSumToN) {
    const AggregateCounts agg{"co", 1000, {{"f0", 100}, {"f1", 300}, {"f2", 200}}};
    CopulaSampler sampler(agg, filters(3, 0.2));
    Rng rng(9);
    const auto counts = sampler.cell_counts(777, rng);
    EXPECT_EQ(counts.size(), 8u);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    EXPECT_EQ(total, 777u);
}

TEST(Copula, Errors) {
    Rng rng(1);
    EXPECT_THROW(copula_generate({"co", 100, {{"ghost", 10}}}, filters(2, 0.1), 10, rng), DomainError);
    EXPECT_THROW(copula_generate({"co", 0, {{"f0", 10}}}, filters(2, 0.1), 10, rng), DomainError);
    EXPECT_THROW(copula_generate({"co", 100, {}}, filters(2, 0.1), 10, rng), DomainError);
}

// ------------------------------------------------------------ adjustment

TEST(Adjust, HalvesAndRoundsHalfUp) {
    const std::vector<std::uint64_t> draws{18, 20, 0};
    EXPECT_EQ(adjust_headcount_draws(draws, {0.5, 0}), (std::vector<std::uint64_t>{9, 10, 0}));
    const std::vector<std::uint64_t> odd{1, 3, 5};
    EXPECT_EQ(adjust_headcount_draws(odd, {0.5, 0}), (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Adjust, UnitAdjustmentIsIdentity) {
    const std::vector<std::uint64_t> draws{0, 7, 13, 1000};
    EXPECT_EQ(adjust_headcount_draws(draws, {1.0, 0}), draws);
}

TEST(Adjust, QuantileScaling) {
    Rng rng(10);
    std::poisson_distribution<std::uint64_t> poisson(37.0);
    std::vector<std::uint64_t> draws(1000);
    for (auto& d : draws) d = poisson(rng);
    const auto adjusted = adjust_headcount_draws(draws, {0.5, 0});
    const auto raw = summarize("x", 100, draws, EstimateMethod::Synthetic);
    const auto adj = summarize("x", 100, adjusted, EstimateMethod::Synthetic);
    EXPECT_LE(std::llabs(static_cast<long long>(adj.q50) - std::llround(0.5 * static_cast<double>(raw.q50))), 1);
}

TEST(Adjust, MonotoneMap) {
    std::vector<std::uint64_t> draws(200);
    for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = i;
    const auto out = adjust_headcount_draws(draws, {0.37, 0});
    EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
}

TEST(Adjust, RejectsBadFactor) {
    const std::vector<std::uint64_t> draws{1};
    EXPECT_THROW(adjust_headcount_draws(draws, {0.0, 0}), DomainError);
    EXPECT_THROW(adjust_headcount_draws(draws, {1.5, 0}), DomainError);
}
