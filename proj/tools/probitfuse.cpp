#include "probitfuse/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
    std::uint64_t seed = 0;
    std::size_t iterations = 1000;
    double accuracy = 1e-3;
    std::string priors;
    std::string out;
    std::string org_type;
    std::string size_band;
    double adjustment = 0.5;
    std::size_t threads = 0;
    std::size_t min_class_count = 30;
    double ratio_limit = 3.0;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--seed", f.seed, "Base seed for all random substreams")->envname("PROBITFUSE_SEED");
    cmd->add_option("--iterations", f.iterations, "Bootstrap iterations")->capture_default_str();
    cmd->add_option("--accuracy", f.accuracy, "Orthant probability absolute accuracy")->capture_default_str();
    cmd->add_option("--priors", f.priors, "Priors JSON file (defaults to the built-in table)");
    cmd->add_option("--org-type", f.org_type, "Override org type: consulting_or_ml, non_ml, unknown");
    cmd->add_option("--size-band", f.size_band, "Override size band: lt100, 100to1k, 1kto10k, gte10k, unknown");
    cmd->add_option("--adjustment", f.adjustment, "Synthetic-path headcount adjustment")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--min-class-count", f.min_class_count,
                    "Minimum records per class for class-specific correlations")
        ->capture_default_str();
}

probitfuse::RunConfig to_config(const Flags& f) {
    probitfuse::RunConfig c;
    c.seed = f.seed;
    c.iterations = f.iterations;
    c.accuracy = f.accuracy;
    if (!f.priors.empty()) c.priors_path = f.priors;
    c.output_path = f.out;
    if (!f.org_type.empty()) c.org_type = probitfuse::parse_org_type(f.org_type);
    if (!f.size_band.empty()) c.size_band = probitfuse::parse_size_band(f.size_band);
    c.adjustment = f.adjustment;
    c.threads = f.threads;
    c.min_class_count = f.min_class_count;
    c.ingestion.headcount_ratio_limit = f.ratio_limit;
    return c;
}

std::optional<std::string> optional_path(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

void print_warnings(const probitfuse::Warnings& w) {
    for (const auto& msg : w.snapshot()) std::cerr << "warning: " << msg << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Headcount estimation from noisy correlated annotators"};
    app.require_subcommand(1);
    Flags flags;

    std::string validation;
    auto* calibrate = app.add_subcommand("calibrate", "Fit annotator profiles and correlations");
    calibrate->add_option("--validation", validation, "Validation CSV")->required();
    calibrate->add_option("--out", flags.out, "Output JSON")->required();
    calibrate->add_option("--seed", flags.seed, "Base seed")->envname("PROBITFUSE_SEED");
    calibrate->add_option("--accuracy", flags.accuracy, "Orthant probability absolute accuracy");
    calibrate->add_option("--min-class-count", flags.min_class_count, "Minimum records per class");

    std::string companies;
    std::string aggregates;
    auto* estimate = app.add_subcommand("estimate", "Estimate expert headcounts per company");
    estimate->add_option("--validation", validation, "Validation CSV")->required();
    estimate->add_option("--companies", companies, "Employee-level annotations CSV");
    estimate->add_option("--aggregates", aggregates, "Aggregate keyword counts CSV");
    estimate->add_option("--out", flags.out, "Output report CSV")->required();
    estimate->add_option("--ratio-limit", flags.ratio_limit, "Headcount ratio above which LLM columns are dropped")
        ->capture_default_str();
    add_run_flags(estimate, flags);

    std::string scenario;
    auto* simulate = app.add_subcommand("simulate", "Run a ground-truth simulation and write a scoreboard");
    simulate->add_option("--scenario", scenario, "Scenario JSON (default scenario when omitted)");
    simulate->add_option("--out", flags.out, "Output scoreboard JSON")->required();
    add_run_flags(simulate, flags);

    std::string report_path;
    auto* report = app.add_subcommand("report", "Render a report CSV as a table");
    report->add_option("report", report_path, "Report CSV")->required();

    CLI11_PARSE(app, argc, argv);

    probitfuse::Warnings warnings;
    try {
        const auto config = to_config(flags);
        if (calibrate->parsed()) {
            const auto j = probitfuse::cmd_calibrate(validation, config);
            std::cout << "fused accuracy " << j["fused"]["accuracy"] << ", wrote " << config.output_path << '\n';
        } else if (estimate->parsed()) {
            const auto run =
                probitfuse::cmd_estimate(validation, optional_path(companies), optional_path(aggregates), config, &warnings);
            for (const auto& id : run.flagged) {
                std::cerr << "flagged: " << id << " (LLM annotations dropped by the headcount ratio rule)\n";
            }
            std::cout << run.estimates.size() << " companies, aggregate q50 " << run.aggregate.q50 << " ("
                      << run.aggregate.q10 << " - " << run.aggregate.q90 << "), wrote " << config.output_path << '\n';
        } else if (simulate->parsed()) {
            const auto run = probitfuse::cmd_simulate(optional_path(scenario), config, &warnings);
            std::cout << "coverage " << run.board.coverage << ", median |q50 - truth| "
                      << run.board.median_abs_error_q50 << ", fused accuracy " << run.board.fused.accuracy
                      << ", wrote " << config.output_path << '\n';
        } else if (report->parsed()) {
            std::cout << probitfuse::cmd_report(report_path);
        }
    } catch (const std::exception& e) {
        print_warnings(warnings);
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
    print_warnings(warnings);
    return EXIT_SUCCESS;
}
