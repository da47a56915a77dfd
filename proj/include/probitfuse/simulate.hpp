#pragma once
// Ground-truth populations drawn from the same latent probit model the
// estimator assumes, and a scoreboard comparing estimates against truth.

#include "probitfuse/bootstrap.hpp"
#include "probitfuse/calibration.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/inference.hpp"
#include "probitfuse/numerics.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace probitfuse {

struct SimulationScenario {
    std::size_t n_companies = 40;
    std::size_t employees_min = 20;
    std::size_t employees_max = 200;
    double true_prevalence = 0.05;
    std::vector<AnnotatorProfile> annotator_profiles;
    CorrelationStructure structure;
    std::size_t validation_size = 585;
    double validation_prevalence = 153.0 / 585.0;
    // Prior used when estimating the simulated companies; see prior_spec().
    std::optional<PriorSpec> prior;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_companies == 0) throw ConfigError("scenario.n_companies must be at least 1");
        if (employees_min == 0 || employees_min > employees_max) {
            throw ConfigError("scenario.employees_min must be in [1, employees_max]");
        }
        if (!(true_prevalence >= 0.0 && true_prevalence < 1.0)) {
            throw ConfigError("scenario.prevalence must lie in [0, 1)");
        }
        if (!(validation_prevalence > 0.0 && validation_prevalence < 1.0)) {
            throw ConfigError("scenario.validation_prevalence must lie in (0, 1)");
        }
        if (validation_size < 2) throw ConfigError("scenario.validation_size must be at least 2");
        if (annotator_profiles.empty()) throw ConfigError("scenario.annotators must not be empty");
        if (annotator_profiles.size() != structure.panel.size() ||
            structure.r_pos.dim() != structure.panel.size() || structure.r_neg.dim() != structure.panel.size()) {
            throw ConfigError("scenario.annotators and the correlation matrices must cover the same panel");
        }
        for (std::size_t i = 0; i < annotator_profiles.size(); ++i) {
            if (annotator_profiles[i].annotator_id != structure.panel[i]) {
                throw ConfigError("scenario.annotators: panel order mismatch at '" +
                                  annotator_profiles[i].annotator_id + "'");
            }
        }
        try {
            (void)cholesky_lower(structure.r_pos.clamped());
            (void)cholesky_lower(structure.r_neg.clamped());
        } catch (const FactorizationError&) {
            throw ConfigError("scenario correlation matrices must be positive definite");
        }
        if (prior) prior->validate();
    }

    // Explicit prior if given; otherwise Beta with the true prevalence as mean
    // and concentration 40, or Beta(1, 9999) when the prevalence is zero.
    PriorSpec prior_spec() const {
        if (prior) return *prior;
        if (true_prevalence <= 0.0) return {OrgType::Unknown, SizeBand::Unknown, 1.0, 9999.0};
        return {OrgType::Unknown, SizeBand::Unknown, 40.0 * true_prevalence, 40.0 * (1.0 - true_prevalence)};
    }
};

// Six annotators, three keyword filters and three LLM classifiers, with
// latent correlation 0.3 in both classes.
inline SimulationScenario default_scenario(std::uint64_t seed = 0) {
    SimulationScenario s;
    s.seed = seed;
    s.annotator_profiles = {
        make_profile("broad", 0.90, 0.75),      make_profile("strict", 0.55, 0.96),
        make_profile("combined", 0.70, 0.90),   make_profile("llm_claude", 0.78, 0.92),
        make_profile("llm_gpt5", 0.75, 0.93),   make_profile("llm_gemini", 0.85, 0.85),
    };
    std::vector<std::string> panel;
    for (const auto& p : s.annotator_profiles) panel.push_back(p.annotator_id);
    s.structure = {panel, CorrelationMatrix::equicorrelated(panel.size(), 0.3),
                   CorrelationMatrix::equicorrelated(panel.size(), 0.3)};
    return s;
}

struct SimulatedCompany {
    std::string company_id;
    std::vector<AnnotationPattern> employees;
    std::vector<TrueClass> truth;

    std::uint64_t true_count() const noexcept {
        return static_cast<std::uint64_t>(std::count(truth.begin(), truth.end(), TrueClass::Expert));
    }
};

struct Population {
    ValidationSet validation;
    std::vector<SimulatedCompany> companies;
};

// Draws annotations for one person of the given class: latent N(0, R_class)
// thresholded at each annotator's class threshold.
class LatentAnnotator {
public:
    LatentAnnotator(std::span<const AnnotatorProfile> profiles, const CorrelationStructure& structure)
        : profiles_(profiles.begin(), profiles.end()),
          chol_pos_(cholesky_lower(structure.r_pos.clamped())),
          chol_neg_(cholesky_lower(structure.r_neg.clamped())) {}

    AnnotationPattern draw(TrueClass cls, Rng& rng) {
        const Eigen::MatrixXd& l = cls == TrueClass::Expert ? chol_pos_ : chol_neg_;
        const auto n = static_cast<Eigen::Index>(profiles_.size());
        Eigen::VectorXd z(n);
        for (Eigen::Index j = 0; j < n; ++j) z(j) = normal_(rng);
        const Eigen::VectorXd latent = l.triangularView<Eigen::Lower>() * z;
        AnnotationPattern out(std::vector<Label>(profiles_.size()));
        for (std::size_t j = 0; j < profiles_.size(); ++j) {
            out.values[j] = latent(static_cast<Eigen::Index>(j)) > profiles_[j].threshold(cls) ? Label::Positive
                                                                                                  : Label::Negative;
        }
        return out;
    }

private:
    std::vector<AnnotatorProfile> profiles_;
    Eigen::MatrixXd chol_pos_;
    Eigen::MatrixXd chol_neg_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline std::string numbered_id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i + 1);
    return buf;
}

// Validation records have exactly round(size * validation_prevalence)
// experts (at least one of each class); company labels are Bernoulli.
inline Population generate_population(const SimulationScenario& scenario) {
    scenario.validate();
    LatentAnnotator annotate(scenario.annotator_profiles, scenario.structure);
    Population pop;
    pop.validation.panel = scenario.structure.panel;

    Rng vrng = substream(scenario.seed, Stream::Simulation, 0);
    const auto experts = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(static_cast<double>(scenario.validation_size) *
                                             scenario.validation_prevalence)),
        1, scenario.validation_size - 1);
    for (std::size_t i = 0; i < scenario.validation_size; ++i) {
        const TrueClass cls = i < experts ? TrueClass::Expert : TrueClass::NonExpert;
        pop.validation.records.push_back({numbered_id("v", i), cls, annotate.draw(cls, vrng)});
    }

    for (std::size_t c = 0; c < scenario.n_companies; ++c) {
        Rng rng = substream(scenario.seed, Stream::Simulation, 1, c);
        std::uniform_int_distribution<std::size_t> size(scenario.employees_min, scenario.employees_max);
        std::bernoulli_distribution expert(scenario.true_prevalence);
        SimulatedCompany company;
        company.company_id = numbered_id("sim-", c);
        const std::size_t n = size(rng);
        for (std::size_t e = 0; e < n; ++e) {
            const TrueClass cls = expert(rng) ? TrueClass::Expert : TrueClass::NonExpert;
            company.truth.push_back(cls);
            company.employees.push_back(annotate.draw(cls, rng));
        }
        pop.companies.push_back(std::move(company));
    }
    return pop;
}

struct ScoreboardRow {
    std::string company_id;
    std::uint64_t n_employees = 0;
    std::uint64_t true_count = 0;
    std::uint64_t q10 = 0;
    std::uint64_t q50 = 0;
    std::uint64_t q90 = 0;
    bool covered = false;
};

struct AnnotatorScore {
    std::string annotator_id;
    DiagnosticReport report;
};

struct Scoreboard {
    std::vector<ScoreboardRow> rows;
    // Fraction of companies whose true count lies in [q10, q90].
    double coverage = 0.0;
    double median_abs_error_q50 = 0.0;
    DiagnosticReport fused;
    std::vector<AnnotatorScore> individual;

    bool fused_beats_individuals() const noexcept {
        return std::all_of(individual.begin(), individual.end(),
                           [&](const AnnotatorScore& a) { return fused.accuracy >= a.report.accuracy; });
    }
};

inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Fused-vs-individual accuracy is measured on the validation records with
// their own calibration and base rate, posteriors cut at 0.5.
inline Scoreboard scoreboard(const SimulationScenario& scenario, const Population& population,
                             std::span<const EstimateSummary> estimates, double accuracy = 1e-3) {
    if (estimates.empty()) throw DomainError("scoreboard: no estimates");
    if (estimates.size() != population.companies.size()) {
        throw DomainError("scoreboard: " + std::to_string(estimates.size()) + " estimates for " +
                          std::to_string(population.companies.size()) + " companies");
    }
    Scoreboard board;
    std::vector<double> errors;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto& est = estimates[i];
        const auto& company = population.companies[i];
        if (est.company_id != company.company_id) {
            throw DomainError("scoreboard: estimate '" + est.company_id + "' is misaligned with company '" +
                              company.company_id + "'");
        }
        ScoreboardRow row;
        row.company_id = company.company_id;
        row.n_employees = company.employees.size();
        row.true_count = company.true_count();
        row.q10 = est.q10;
        row.q50 = est.q50;
        row.q90 = est.q90;
        row.covered = est.q10 <= row.true_count && row.true_count <= est.q90;
        covered += row.covered;
        errors.push_back(std::fabs(static_cast<double>(est.q50) - static_cast<double>(row.true_count)));
        board.rows.push_back(std::move(row));
    }
    board.coverage = static_cast<double>(covered) / static_cast<double>(estimates.size());
    board.median_abs_error_q50 = median(std::move(errors));

    const auto& validation = population.validation;
    const Calibration cal = calibrate(validation, validation.panel);
    const double base_rate =
        static_cast<double>(validation.count(TrueClass::Expert)) / static_cast<double>(validation.records.size());
    const auto post =
        validation_posteriors(validation, cal, base_rate, substream_seed(scenario.seed, Stream::Qmc), accuracy);
    board.fused = fused_confusion(validation, post, 0.5);
    for (const auto& id : validation.panel) {
        board.individual.push_back({id, diagnostic_metrics(count_confusion(validation, id))});
    }
    return board;
}

struct SimulationRun {
    Population population;
    std::vector<CompanyEstimate> estimates;
    Scoreboard board;
};

// Generate, estimate every company with the scenario prior, and score.
inline SimulationRun run_simulation(const SimulationScenario& scenario, const BootstrapConfig& config) {
    SimulationRun run;
    run.population = generate_population(scenario);
    const BootstrapEngine engine(run.population.validation, config);
    const PriorSpec prior = scenario.prior_spec();
    std::vector<EstimateSummary> summaries;
    for (const auto& c : run.population.companies) {
        run.estimates.push_back(engine.estimate(EmployeeCompany{c.company_id, c.employees}, prior));
        summaries.push_back(run.estimates.back().summary);
    }
    run.board = scoreboard(scenario, run.population, summaries, config.accuracy);
    return run;
}

} // namespace probitfuse
