#pragma once
// Five-source bootstrap of company headcounts: validation resampling for
// confusion profiles and correlations, Beta prior draws, employee
// resampling (or copula regeneration), and Bernoulli realisation.

#include "probitfuse/calibration.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/inference.hpp"
#include "probitfuse/parallel.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/synthetic.hpp"
#include "probitfuse/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace probitfuse {

enum class OrgType : std::uint8_t { ConsultingOrMl, NonMl, Unknown };
enum class SizeBand : std::uint8_t { Lt100, From100To1k, From1kTo10k, Gte10k, Unknown };

inline constexpr std::string_view to_string(OrgType t) noexcept {
    switch (t) {
    case OrgType::ConsultingOrMl: return "consulting_or_ml";
    case OrgType::NonMl: return "non_ml";
    case OrgType::Unknown: return "unknown";
    }
    return "unknown";
}

inline constexpr std::string_view to_string(SizeBand b) noexcept {
    switch (b) {
    case SizeBand::Lt100: return "lt100";
    case SizeBand::From100To1k: return "100to1k";
    case SizeBand::From1kTo10k: return "1kto10k";
    case SizeBand::Gte10k: return "gte10k";
    case SizeBand::Unknown: return "unknown";
    }
    return "unknown";
}

inline OrgType parse_org_type(std::string_view s) {
    for (OrgType t : {OrgType::ConsultingOrMl, OrgType::NonMl, OrgType::Unknown}) {
        if (s == to_string(t)) return t;
    }
    throw ConfigError("unknown org_type '" + std::string(s) + "' (expected consulting_or_ml, non_ml or unknown)");
}

inline SizeBand parse_size_band(std::string_view s) {
    for (SizeBand b : {SizeBand::Lt100, SizeBand::From100To1k, SizeBand::From1kTo10k, SizeBand::Gte10k,
                       SizeBand::Unknown}) {
        if (s == to_string(b)) return b;
    }
    throw ConfigError("unknown size_band '" + std::string(s) +
                      "' (expected lt100, 100to1k, 1kto10k, gte10k or unknown)");
}

// Boundary headcounts go to the larger band.
inline SizeBand size_band_for(std::uint64_t headcount) noexcept {
    if (headcount < 100) return SizeBand::Lt100;
    if (headcount < 1000) return SizeBand::From100To1k;
    if (headcount < 10000) return SizeBand::From1kTo10k;
    return SizeBand::Gte10k;
}

// Beta prior on expert prevalence for one (organisation type, size band).
struct PriorSpec {
    OrgType org_type = OrgType::Unknown;
    SizeBand size_band = SizeBand::Unknown;
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const noexcept { return alpha / (alpha + beta); }

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
            throw ConfigError("prior for " + std::string(to_string(org_type)) + "/" +
                              std::string(to_string(size_band)) + ": alpha and beta must be positive");
        }
    }

    friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

// Size-stratified priors for ML organisations, one for non-ML organisations
// of any size (stored under size_band unknown) and one for unknown size.
inline std::vector<PriorSpec> default_priors() {
    return {
        {OrgType::ConsultingOrMl, SizeBand::Lt100, 2.4, 21.7},
        {OrgType::ConsultingOrMl, SizeBand::From100To1k, 3.0, 57.0},
        {OrgType::ConsultingOrMl, SizeBand::From1kTo10k, 1.6, 154.8},
        {OrgType::ConsultingOrMl, SizeBand::Gte10k, 1.0, 999.0},
        {OrgType::NonMl, SizeBand::Unknown, 1.0, 9999.0},
        {OrgType::Unknown, SizeBand::Unknown, 1.6, 154.8},
    };
}

// Non-ML organisations use their single row regardless of size; anything
// without an exact (type, band) row falls back to the unknown row.
inline PriorSpec select_prior(std::span<const PriorSpec> priors, OrgType org, SizeBand band) {
    const auto find = [&](OrgType o, SizeBand b) -> const PriorSpec* {
        for (const auto& p : priors) {
            if (p.org_type == o && p.size_band == b) return &p;
        }
        return nullptr;
    };
    const PriorSpec* hit = nullptr;
    if (org == OrgType::NonMl) {
        hit = find(OrgType::NonMl, band);
        if (hit == nullptr) hit = find(OrgType::NonMl, SizeBand::Unknown);
    } else {
        hit = find(org, band);
    }
    if (hit == nullptr) hit = find(OrgType::Unknown, SizeBand::Unknown);
    if (hit == nullptr) {
        throw ConfigError("no prior for " + std::string(to_string(org)) + "/" + std::string(to_string(band)) +
                          " and no unknown/unknown fallback row");
    }
    return *hit;
}

enum class Category : std::uint8_t { Probable, Possible, NonZero, NotDetected };
enum class EstimateMethod : std::uint8_t { Real, Synthetic, Portfolio };

inline constexpr std::string_view to_string(Category c) noexcept {
    switch (c) {
    case Category::Probable: return "Probable";
    case Category::Possible: return "Possible";
    case Category::NonZero: return "Non-zero";
    case Category::NotDetected: return "Not Detected";
    }
    return "Not Detected";
}

inline constexpr std::string_view to_string(EstimateMethod m) noexcept {
    switch (m) {
    case EstimateMethod::Real: return "real";
    case EstimateMethod::Synthetic: return "synthetic";
    case EstimateMethod::Portfolio: return "portfolio";
    }
    return "real";
}

inline Category parse_category(std::string_view s) {
    for (Category c : {Category::Probable, Category::Possible, Category::NonZero, Category::NotDetected}) {
        if (s == to_string(c)) return c;
    }
    throw DomainError("unknown category '" + std::string(s) + "'");
}

inline EstimateMethod parse_method(std::string_view s) {
    for (EstimateMethod m : {EstimateMethod::Real, EstimateMethod::Synthetic, EstimateMethod::Portfolio}) {
        if (s == to_string(m)) return m;
    }
    throw DomainError("unknown method '" + std::string(s) + "'");
}

inline Category classify(std::uint64_t q10, std::uint64_t q50, std::uint64_t q90) {
    if (q10 > q50 || q50 > q90) throw DomainError("classify: quantiles must satisfy q10 <= q50 <= q90");
    if (q10 > 0) return Category::Probable;
    if (q50 > 0) return Category::Possible;
    if (q90 > 0) return Category::NonZero;
    return Category::NotDetected;
}

struct EstimateSummary {
    std::string company_id;
    std::uint64_t n_employees = 0;
    double mean = 0.0;
    std::uint64_t q10 = 0;
    std::uint64_t q50 = 0;
    std::uint64_t q90 = 0;
    Category category = Category::NotDetected;
    EstimateMethod method = EstimateMethod::Real;

    friend bool operator==(const EstimateSummary&, const EstimateSummary&) = default;
};

// Nearest-rank quantile of sorted integer draws.
inline std::uint64_t nearest_rank(std::span<const std::uint64_t> sorted, double p) {
    if (sorted.empty()) throw DomainError("nearest_rank: no draws");
    const double rank = std::ceil(p * static_cast<double>(sorted.size()) - 1e-9);
    const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size()))) - 1;
    return sorted[idx];
}

inline EstimateSummary summarize(std::string company_id, std::uint64_t n_employees,
                                 std::span<const std::uint64_t> draws, EstimateMethod method) {
    if (draws.empty()) throw DomainError("summarize: no draws");
    std::vector<std::uint64_t> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    EstimateSummary s;
    s.company_id = std::move(company_id);
    s.n_employees = n_employees;
    double total = 0.0;
    for (auto d : draws) total += static_cast<double>(d);
    s.mean = total / static_cast<double>(draws.size());
    s.q10 = nearest_rank(sorted, 0.10);
    s.q50 = nearest_rank(sorted, 0.50);
    s.q90 = nearest_rank(sorted, 0.90);
    s.category = classify(s.q10, s.q50, s.q90);
    s.method = method;
    return s;
}

struct BootstrapConfig {
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    std::size_t min_class_count = 30;
    double accuracy = 1e-3;
    double adjustment = 0.5;
    // 0 means hardware concurrency; results do not depend on it.
    std::size_t threads = 0;
    std::size_t max_consecutive_failures = 10;

    void validate() const {
        if (iterations == 0) throw ConfigError("iterations must be at least 1");
        if (!(accuracy > 0.0 && accuracy <= 0.1)) throw ConfigError("accuracy must lie in (0, 0.1]");
        if (!(adjustment > 0.0 && adjustment <= 1.0)) throw ConfigError("adjustment must lie in (0, 1]");
        if (max_consecutive_failures == 0) throw ConfigError("max_consecutive_failures must be at least 1");
    }
};

// A company with employee-level annotations over the calibration panel.
struct EmployeeCompany {
    std::string company_id;
    std::vector<AnnotationPattern> employees;
};

using CompanyInput = std::variant<EmployeeCompany, AggregateCounts>;

inline const std::string& company_id(const CompanyInput& c) {
    return std::visit([](const auto& v) -> const std::string& { return v.company_id; }, c);
}

struct CompanyEstimate {
    EstimateSummary summary;
    // Per-iteration headcounts, after the synthetic adjustment when it applies.
    std::vector<std::uint64_t> draws;
    std::size_t all_missing_employees = 0;
};

// Holds one calibrated model per bootstrap iteration (profiles and
// correlations from a validation resample, plus a likelihood cache) and
// reuses them for every company so that portfolio totals can be summed
// iteration by iteration.
class BootstrapEngine {
public:
    BootstrapEngine(const ValidationSet& validation, BootstrapConfig config)
        : BootstrapEngine(validation, validation.panel, config) {}

    BootstrapEngine(const ValidationSet& validation, std::vector<std::string> panel, BootstrapConfig config)
        : config_(config), panel_(std::move(panel)) {
        config_.validate();
        validation.validate();
        if (panel_.empty()) throw DomainError("bootstrap: empty annotator panel");
        models_.resize(config_.iterations);
        parallel_for(config_.iterations, config_.threads,
                     [&](std::size_t i) { models_[i] = calibrate_iteration(validation, i); });
    }

    const BootstrapConfig& config() const noexcept { return config_; }
    const std::vector<std::string>& panel() const noexcept { return panel_; }
    std::size_t iterations() const noexcept { return models_.size(); }
    const PatternLikelihoodCache& model(std::size_t iteration) const { return *models_.at(iteration); }

    CompanyEstimate estimate(const CompanyInput& company, const PriorSpec& prior) const {
        prior.validate();
        const std::string& id = company_id(company);
        const std::uint64_t key = stable_hash(id);
        std::vector<std::uint64_t> draws(config_.iterations, 0);

        if (const auto* real = std::get_if<EmployeeCompany>(&company)) {
            if (real->employees.empty()) throw DomainError("company '" + id + "' has no employees");
            for (const auto& e : real->employees) {
                if (e.size() != panel_.size()) {
                    throw DomainError("company '" + id + "': employee pattern does not match the panel");
                }
            }
            parallel_for(config_.iterations, config_.threads, [&](std::size_t i) {
                const double pi = draw_prevalence(prior, key, i);
                Rng pick = substream(config_.seed, Stream::Employees, key, i);
                std::uniform_int_distribution<std::size_t> index(0, real->employees.size() - 1);
                std::vector<AnnotationPattern> sample;
                sample.reserve(real->employees.size());
                for (std::size_t k = 0; k < real->employees.size(); ++k) sample.push_back(real->employees[index(pick)]);
                const auto post = company_posteriors(sample, pi, *models_[i]);
                Rng realize = substream(config_.seed, Stream::Realization, key, i);
                draws[i] = realize_headcount(post.posteriors, realize);
            });
            CompanyEstimate out;
            out.summary = summarize(id, real->employees.size(), draws, EstimateMethod::Real);
            out.draws = std::move(draws);
            out.all_missing_employees = static_cast<std::size_t>(std::count_if(
                real->employees.begin(), real->employees.end(), [](const auto& e) { return e.all_missing(); }));
            return out;
        }

        const auto& agg = std::get<AggregateCounts>(company);
        // Fails fast on filters outside the panel before any iteration runs.
        (void)filter_prevalences(agg);
        parallel_for(config_.iterations, config_.threads, [&](std::size_t i) {
            const double pi = draw_prevalence(prior, key, i);
            const PatternLikelihoodCache& model = *models_[i];
            CopulaSampler sampler(agg, model.structure());
            Rng copula = substream(config_.seed, Stream::Copula, key, i);
            const auto counts = sampler.cell_counts(agg.total_headcount, copula);
            Rng realize = substream(config_.seed, Stream::Realization, key, i);
            std::uint64_t total = 0;
            for (std::uint32_t cell = 0; cell < counts.size(); ++cell) {
                if (counts[cell] == 0) continue;
                const double p = model.posterior(sampler.pattern(cell), pi);
                // Sum of counts[cell] independent Bernoulli(p) draws.
                std::binomial_distribution<std::uint64_t> bin(counts[cell], p);
                total += bin(realize);
            }
            draws[i] = total;
        });
        CompanyEstimate out;
        out.draws = adjust_headcount_draws(draws, SyntheticConfig{config_.adjustment, config_.seed});
        out.summary = summarize(id, agg.total_headcount, out.draws, EstimateMethod::Synthetic);
        return out;
    }

private:
    std::unique_ptr<PatternLikelihoodCache> calibrate_iteration(const ValidationSet& validation,
                                                               std::size_t i) const {
        std::string last_error;
        for (std::size_t attempt = 0; attempt < config_.max_consecutive_failures; ++attempt) {
            Rng rng = substream(config_.seed, Stream::Calibration, i, attempt);
            ValidationSet resample;
            resample.panel = validation.panel;
            resample.records.reserve(validation.records.size());
            std::uniform_int_distribution<std::size_t> index(0, validation.records.size() - 1);
            for (std::size_t k = 0; k < validation.records.size(); ++k) {
                resample.records.push_back(validation.records[index(rng)]);
            }
            try {
                Calibration cal = calibrate(resample, panel_, config_.min_class_count);
                return std::make_unique<PatternLikelihoodCache>(std::move(cal.profiles), std::move(cal.structure),
                                                                substream_seed(config_.seed, Stream::Qmc, i),
                                                                config_.accuracy);
            } catch (const CalibrationError& e) {
                last_error = e.what();
            } catch (const FactorizationError& e) {
                last_error = e.what();
            }
        }
        throw CalibrationError("bootstrap iteration " + std::to_string(i) + ": calibration failed " +
                               std::to_string(config_.max_consecutive_failures) +
                               " consecutive times; last error: " + last_error);
    }

    double draw_prevalence(const PriorSpec& prior, std::uint64_t key, std::size_t i) const {
        Rng rng = substream(config_.seed, Stream::Prior, key, i);
        return std::clamp(sample_beta(rng, prior.alpha, prior.beta), 1e-12, 1.0 - 1e-12);
    }

    BootstrapConfig config_;
    std::vector<std::string> panel_;
    std::vector<std::unique_ptr<PatternLikelihoodCache>> models_;
};

inline CompanyEstimate run_company_estimate(const CompanyInput& company, const ValidationSet& validation,
                                            const PriorSpec& prior, const BootstrapConfig& config) {
    const BootstrapEngine engine(validation, config);
    return engine.estimate(company, prior);
}

// Iteration-aligned portfolio total. Rows are iterations, columns companies.
inline EstimateSummary aggregate_portfolio(std::span<const std::vector<std::uint64_t>> draws_by_iteration,
                                           std::uint64_t n_employees = 0, std::string id = "AGGREGATE") {
    if (draws_by_iteration.empty()) throw DomainError("aggregate_portfolio: no iterations");
    const std::size_t companies = draws_by_iteration.front().size();
    std::vector<std::uint64_t> totals;
    totals.reserve(draws_by_iteration.size());
    for (const auto& row : draws_by_iteration) {
        if (row.size() != companies) throw DomainError("aggregate_portfolio: ragged draw matrix");
        std::uint64_t sum = 0;
        for (auto d : row) sum += d;
        totals.push_back(sum);
    }
    return summarize(std::move(id), n_employees, totals, EstimateMethod::Portfolio);
}

// Transposes per-company draw vectors into the iterations x companies layout.
inline std::vector<std::vector<std::uint64_t>> draws_by_iteration(std::span<const CompanyEstimate> estimates) {
    if (estimates.empty()) return {};
    const std::size_t iterations = estimates.front().draws.size();
    std::vector<std::vector<std::uint64_t>> out(iterations, std::vector<std::uint64_t>(estimates.size()));
    for (std::size_t c = 0; c < estimates.size(); ++c) {
        if (estimates[c].draws.size() != iterations) {
            throw DomainError("companies were estimated with different iteration counts");
        }
        for (std::size_t i = 0; i < iterations; ++i) out[i][c] = estimates[c].draws[i];
    }
    return out;
}

} // namespace probitfuse
