#pragma once
// Subcommand implementations behind the probitfuse executable. Each returns
// its result in memory and writes its output file.

#include "probitfuse/bootstrap.hpp"
#include "probitfuse/calibration.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/inference.hpp"
#include "probitfuse/io.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/simulate.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace probitfuse {

struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t iterations = 1000;
    double accuracy = 1e-3;
    std::optional<std::string> priors_path;
    std::string output_path;
    // Overrides applied to every company when set.
    std::optional<OrgType> org_type;
    std::optional<SizeBand> size_band;
    double adjustment = 0.5;
    std::size_t threads = 0;
    std::size_t min_class_count = 30;
    IngestionRules ingestion;

    void validate() const {
        if (iterations < 1) throw ConfigError("iterations must be at least 1");
        if (!(accuracy > 0.0 && accuracy <= 0.1)) throw ConfigError("accuracy must lie in (0, 0.1]");
        if (!(adjustment > 0.0 && adjustment <= 1.0)) throw ConfigError("adjustment must lie in (0, 1]");
        ingestion.validate();
    }

    BootstrapConfig bootstrap() const {
        BootstrapConfig b;
        b.iterations = iterations;
        b.seed = seed;
        b.min_class_count = min_class_count;
        b.accuracy = accuracy;
        b.adjustment = adjustment;
        b.threads = threads;
        return b;
    }
};

// ------------------------------------------------------------- calibrate

inline nlohmann::json calibration_json(const ValidationSet& validation, const Calibration& cal,
                                       const DiagnosticReport& fused) {
    nlohmann::json annotators = nlohmann::json::array();
    for (const auto& p : cal.profiles) {
        annotators.push_back({{"id", p.annotator_id},
                              {"sensitivity", p.sensitivity},
                              {"specificity", p.specificity},
                              {"tau_pos", p.tau_pos},
                              {"tau_neg", p.tau_neg},
                              {"diagnostics",
                               diagnostics_json(diagnostic_metrics(count_confusion(validation, p.annotator_id)))}});
    }
    return {{"records", validation.records.size()},
            {"experts", validation.count(TrueClass::Expert)},
            {"non_experts", validation.count(TrueClass::NonExpert)},
            {"panel", cal.structure.panel},
            {"annotators", annotators},
            {"r_pos", matrix_json(cal.structure.r_pos)},
            {"r_neg", matrix_json(cal.structure.r_neg)},
            {"fused", diagnostics_json(fused)}};
}

// Calibrates on the full validation set, then scores the fused posterior of
// every record at cut 0.5 with the set's own base rate as prevalence.
inline nlohmann::json cmd_calibrate(const std::string& validation_path, const RunConfig& config) {
    config.validate();
    const ValidationSet validation = load_validation(validation_path);
    validation.validate();
    const Calibration cal = calibrate(validation, validation.panel, config.min_class_count);
    const double base_rate = static_cast<double>(validation.count(TrueClass::Expert)) /
                             static_cast<double>(validation.records.size());
    const auto post =
        validation_posteriors(validation, cal, base_rate, substream_seed(config.seed, Stream::Qmc), config.accuracy);
    const auto report = calibration_json(validation, cal, fused_confusion(validation, post, 0.5));
    if (!config.output_path.empty()) write_json(report, config.output_path);
    return report;
}

// -------------------------------------------------------------- estimate

struct EstimateRun {
    std::vector<CompanyEstimate> estimates;
    EstimateSummary aggregate;
    // Companies whose LLM columns were dropped by the headcount ratio rule.
    std::vector<std::string> flagged;
};

// Companies with employee-level rows are estimated from them; companies that
// only appear in the aggregates file use the synthetic path. Report order:
// employee-level companies in file order, then aggregate-only companies.
inline EstimateRun cmd_estimate(const std::string& validation_path, const std::optional<std::string>& companies_path,
                                const std::optional<std::string>& aggregates_path, const RunConfig& config,
                                Warnings* warnings = nullptr) {
    config.validate();
    if (!companies_path && !aggregates_path) {
        throw ConfigError("estimate needs a companies file, an aggregates file, or both");
    }
    const ValidationSet validation = load_validation(validation_path);
    validation.validate();
    const auto priors = load_priors(config.priors_path.value_or(""), warnings);

    std::vector<AggregateRecord> aggregates;
    std::map<std::string, std::size_t> aggregate_index;
    std::map<std::string, std::uint64_t> reported;
    if (aggregates_path) {
        aggregates = load_aggregates(*aggregates_path, config.ingestion);
        for (std::size_t i = 0; i < aggregates.size(); ++i) {
            aggregate_index.emplace(aggregates[i].counts.company_id, i);
            reported.emplace(aggregates[i].counts.company_id, aggregates[i].counts.total_headcount);
        }
    }
    std::vector<LoadedCompany> companies;
    if (companies_path) {
        companies = load_company_annotations(*companies_path, validation.panel, config.ingestion, reported, warnings);
    }

    const auto prior_for = [&](const std::string& id, std::uint64_t headcount) {
        OrgType org = OrgType::ConsultingOrMl;
        if (const auto it = aggregate_index.find(id); it != aggregate_index.end() && aggregates[it->second].org_type) {
            org = *aggregates[it->second].org_type;
        }
        if (config.org_type) org = *config.org_type;
        const SizeBand band = config.size_band.value_or(size_band_for(headcount));
        return select_prior(priors, org, band);
    };

    const BootstrapEngine engine(validation, config.bootstrap());
    EstimateRun run;
    std::set<std::string> real_ids;
    for (const auto& c : companies) {
        real_ids.insert(c.company.company_id);
        if (c.llm_dropped) run.flagged.push_back(c.company.company_id);
        const std::uint64_t headcount = c.reported_headcount.value_or(c.rows);
        run.estimates.push_back(engine.estimate(c.company, prior_for(c.company.company_id, headcount)));
    }
    for (const auto& a : aggregates) {
        if (real_ids.count(a.counts.company_id) != 0) {
            warn(warnings, "company '" + a.counts.company_id +
                               "' has employee-level data and aggregates; using employee-level data");
            continue;
        }
        Warnings local;
        (void)filter_prevalences(a.counts, &local);
        for (const auto& w : local.snapshot()) warn(warnings, w);
        run.estimates.push_back(engine.estimate(a.counts, prior_for(a.counts.company_id, a.counts.total_headcount)));
    }

    std::uint64_t employees = 0;
    for (const auto& e : run.estimates) employees += e.summary.n_employees;
    const auto matrix = draws_by_iteration(run.estimates);
    run.aggregate = matrix.empty() ? empty_aggregate() : aggregate_portfolio(matrix, employees);
    if (!config.output_path.empty()) {
        std::vector<EstimateSummary> rows;
        for (const auto& e : run.estimates) rows.push_back(e.summary);
        write_report(rows, run.aggregate, config.output_path);
    }
    return run;
}

// -------------------------------------------------------------- simulate

inline nlohmann::json scoreboard_json(const Scoreboard& board) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : board.rows) {
        rows.push_back({{"company_id", r.company_id},
                        {"n_employees", r.n_employees},
                        {"true_count", r.true_count},
                        {"q10", r.q10},
                        {"q50", r.q50},
                        {"q90", r.q90},
                        {"covered", r.covered}});
    }
    nlohmann::json individual = nlohmann::json::array();
    for (const auto& a : board.individual) {
        individual.push_back({{"id", a.annotator_id}, {"diagnostics", diagnostics_json(a.report)}});
    }
    return {{"companies", rows.size()},
            {"coverage", board.coverage},
            {"median_abs_error_q50", board.median_abs_error_q50},
            {"fused", diagnostics_json(board.fused)},
            {"individual", individual},
            {"fused_beats_individuals", board.fused_beats_individuals()},
            {"rows", rows}};
}

// Runs the scenario file, or the default scenario when no path is given.
inline SimulationRun cmd_simulate(const std::optional<std::string>& scenario_path, const RunConfig& config,
                                  Warnings* warnings = nullptr) {
    config.validate();
    const SimulationScenario scenario =
        scenario_path ? load_scenario(*scenario_path, config.seed, warnings) : default_scenario(config.seed);
    SimulationRun run = run_simulation(scenario, config.bootstrap());
    if (!config.output_path.empty()) write_json(scoreboard_json(run.board), config.output_path);
    return run;
}

// ---------------------------------------------------------------- report

inline std::string cmd_report(const std::string& report_path) { return render_report(read_report(report_path)); }

} // namespace probitfuse
