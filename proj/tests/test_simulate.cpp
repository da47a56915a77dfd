#include "helpers.hpp"
#include "probitfuse/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace probitfuse;

namespace {

SimulationScenario small_scenario(std::uint64_t seed) {
    SimulationScenario s;
    s.seed = seed;
    s.annotator_profiles = {make_profile("kw", 0.85, 0.8), make_profile("strict", 0.6, 0.95),
                            make_profile("llm_x", 0.8, 0.9)};
    s.structure = fixtures::equicorrelated(s.annotator_profiles, 0.3);
    s.n_companies = 8;
    s.employees_min = 30;
    s.employees_max = 80;
    s.true_prevalence = 0.1;
    s.validation_size = 300;
    s.validation_prevalence = 0.3;
    return s;
}

ContingencyTable contingency_table(const ValidationSet& v, const std::string& a, const std::string& b,
                                   TrueClass cls) {
    const std::size_t i = v.column(a);
    const std::size_t j = v.column(b);
    ContingencyTable t;
    for (const auto& r : v.records) {
        if (r.gold != cls) continue;
        const bool x = r.annotations[i] == Label::Positive;
        const bool y = r.annotations[j] == Label::Positive;
        (x ? (y ? t.pos_pos : t.pos_neg) : (y ? t.neg_pos : t.neg_neg)) += 1.0;
    }
    return t;
}

// Smallest k with P(Binomial(n, p) <= k) >= q.
std::uint64_t binomial_quantile(std::uint64_t n, double p, double q) {
    double cdf = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
        const double lp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                          static_cast<double>(k) * std::log(p) + static_cast<double>(n - k) * std::log1p(-p);
        cdf += std::exp(lp);
        if (cdf >= q) return k;
    }
    return n;
}

std::vector<EstimateSummary> oracle_estimates(const Population& pop, double p) {
    std::vector<EstimateSummary> out;
    for (const auto& c : pop.companies) {
        EstimateSummary s;
        s.company_id = c.company_id;
        s.n_employees = c.employees.size();
        s.q10 = binomial_quantile(s.n_employees, p, 0.1);
        s.q50 = binomial_quantile(s.n_employees, p, 0.5);
        s.q90 = binomial_quantile(s.n_employees, p, 0.9);
        out.push_back(s);
    }
    return out;
}

std::vector<EstimateSummary> truthful_estimates(const Population& pop) {
    std::vector<EstimateSummary> out;
    for (const auto& c : pop.companies) {
        EstimateSummary s;
        s.company_id = c.company_id;
        s.n_employees = c.employees.size();
        s.q10 = s.q50 = s.q90 = c.true_count();
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(Population, NearPerfectPanelAgreesWithTruth) {
    auto s = small_scenario(1);
    s.annotator_profiles = {make_profile("a", 0.999, 0.999), make_profile("b", 0.999, 0.999)};
    s.structure = fixtures::equicorrelated(s.annotator_profiles, 0.0);
    const auto pop = generate_population(s);
    std::size_t agree = 0;
    std::size_t total = 0;
    for (const auto& c : pop.companies) {
        for (std::size_t e = 0; e < c.employees.size(); ++e) {
            const Label want = c.truth[e] == TrueClass::Expert ? Label::Positive : Label::Negative;
            agree += c.employees[e][0] == want;
            ++total;
        }
    }
    EXPECT_GE(static_cast<double>(agree) / static_cast<double>(total), 0.99);
}

TEST(Population, IdentityCorrelationGivesNearZeroTetrachoric) {
    auto s = small_scenario(2);
    s.structure = fixtures::equicorrelated(s.annotator_profiles, 0.0);
    s.validation_size = 5000;
    const auto pop = generate_population(s);
    const auto t = contingency_table(pop.validation, "kw", "llm_x", TrueClass::NonExpert);
    EXPECT_NEAR(tetrachoric(t), 0.0, 0.1);
}

TEST(Population, ZeroPrevalenceHasNoExperts) {
    auto s = small_scenario(3);
    s.true_prevalence = 0.0;
    const auto pop = generate_population(s);
    for (const auto& c : pop.companies) EXPECT_EQ(c.true_count(), 0u);
}

TEST(Population, ShapeAndDeterminism) {
    const auto s = small_scenario(4);
    const auto a = generate_population(s);
    const auto b = generate_population(s);
    ASSERT_EQ(a.companies.size(), 8u);
    EXPECT_EQ(a.validation.records.size(), 300u);
    EXPECT_EQ(a.validation.count(TrueClass::Expert), 90u);
    for (std::size_t i = 0; i < a.companies.size(); ++i) {
        EXPECT_GE(a.companies[i].employees.size(), 30u);
        EXPECT_LE(a.companies[i].employees.size(), 80u);
        EXPECT_EQ(a.companies[i].employees, b.companies[i].employees);
        EXPECT_EQ(a.companies[i].truth, b.companies[i].truth);
    }
    auto other = s;
    other.seed = 5;
    EXPECT_NE(generate_population(other).companies[0].employees, a.companies[0].employees);
}

TEST(Population, RatesWithinThreeStandardErrors) {
    auto s = default_scenario(6);
    s.validation_size = 10000;
    s.validation_prevalence = 0.5;
    const auto pop = generate_population(s);
    for (const auto& p : s.annotator_profiles) {
        const auto c = count_confusion(pop.validation, p.annotator_id);
        const double n = 5000.0;
        const double sens = static_cast<double>(c.tp) / n;
        const double spec = static_cast<double>(c.tn) / n;
        EXPECT_NEAR(sens, p.sensitivity, 3.0 * std::sqrt(p.sensitivity * (1 - p.sensitivity) / n)) << p.annotator_id;
        EXPECT_NEAR(spec, p.specificity, 3.0 * std::sqrt(p.specificity * (1 - p.specificity) / n)) << p.annotator_id;
    }
    const auto t = contingency_table(pop.validation, "broad", "llm_gemini", TrueClass::Expert);
    EXPECT_NEAR(tetrachoric(t), 0.3, 0.1);
}

TEST(Scenario, ValidationErrors) {
    auto s = small_scenario(1);
    s.n_companies = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_scenario(1);
    s.employees_min = 90;
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_scenario(1);
    s.true_prevalence = 1.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_scenario(1);
    s.annotator_profiles.pop_back();
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_scenario(1);
    s.structure.r_pos = CorrelationMatrix::equicorrelated(3, -0.9);
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_scenario(1);
    s.prior = PriorSpec{OrgType::Unknown, SizeBand::Unknown, 0.0, 1.0};
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Scenario, DefaultPriorCentredOnPrevalence) {
    auto s = small_scenario(1);
    EXPECT_NEAR(s.prior_spec().mean(), 0.1, 1e-12);
    s.true_prevalence = 0.0;
    EXPECT_DOUBLE_EQ(s.prior_spec().beta, 9999.0);
}

TEST(Scoreboard, ExactEstimatesHaveZeroError) {
    const auto s = small_scenario(7);
    const auto pop = generate_population(s);
    const auto board = scoreboard(s, pop, truthful_estimates(pop));
    EXPECT_DOUBLE_EQ(board.median_abs_error_q50, 0.0);
    EXPECT_DOUBLE_EQ(board.coverage, 1.0);
    EXPECT_EQ(board.rows.size(), pop.companies.size());
}

TEST(Scoreboard, OracleIntervalsCoverAboutEightyPercent) {
    auto s = small_scenario(8);
    s.n_companies = 400;
    s.employees_min = 500;
    s.employees_max = 1000;
    s.true_prevalence = 0.2;
    const auto pop = generate_population(s);
    const auto board = scoreboard(s, pop, oracle_estimates(pop, 0.2));
    EXPECT_GE(board.coverage, 0.7);
    EXPECT_LE(board.coverage, 0.9);
}

TEST(Scoreboard, InputErrors) {
    const auto s = small_scenario(9);
    const auto pop = generate_population(s);
    EXPECT_THROW(scoreboard(s, pop, std::vector<EstimateSummary>{}), DomainError);
    auto est = truthful_estimates(pop);
    est.pop_back();
    EXPECT_THROW(scoreboard(s, pop, est), DomainError);
    est = truthful_estimates(pop);
    std::swap(est[0], est[1]);
    EXPECT_THROW(scoreboard(s, pop, est), DomainError);
}

TEST(Scoreboard, FusedBeatsEveryAnnotatorOnDefaultScenario) {
    const auto s = default_scenario(11);
    const auto pop = generate_population(s);
    const auto board = scoreboard(s, pop, truthful_estimates(pop));
    ASSERT_EQ(board.individual.size(), 6u);
    EXPECT_TRUE(board.fused_beats_individuals());
}

TEST(Simulation, EndToEndSmallScenario) {
    const auto s = small_scenario(12);
    BootstrapConfig cfg;
    cfg.iterations = 60;
    cfg.seed = 12;
    cfg.threads = 1;
    const auto run = run_simulation(s, cfg);
    ASSERT_EQ(run.estimates.size(), 8u);
    EXPECT_GE(run.board.coverage, 0.7);
    for (const auto& e : run.estimates) EXPECT_EQ(e.summary.method, EstimateMethod::Real);
}

TEST(Simulation, ZeroPrevalenceEstimatesZero) {
    auto s = small_scenario(13);
    s.true_prevalence = 0.0;
    s.n_companies = 3;
    BootstrapConfig cfg;
    cfg.iterations = 40;
    cfg.threads = 1;
    const auto run = run_simulation(s, cfg);
    for (const auto& e : run.estimates) EXPECT_EQ(e.summary.q50, 0u) << e.summary.company_id;
}
