#pragma once
// Posterior probability of expertise from an annotation pattern, and
// realised headcounts from per-employee posteriors.

#include "probitfuse/calibration.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/numerics.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/types.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

namespace probitfuse {

inline constexpr double kLikelihoodFloor = 1e-300;

namespace detail {

inline void check_alignment(const AnnotationPattern& pattern, std::span<const AnnotatorProfile> profiles,
                            const CorrelationStructure& structure) {
    const std::size_t n = structure.panel.size();
    if (pattern.size() != n || profiles.size() != n || structure.r_pos.dim() != n || structure.r_neg.dim() != n) {
        throw DomainError("pattern, profiles and correlation structure must cover the same panel");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (profiles[i].annotator_id != structure.panel[i]) {
            throw DomainError("profile '" + profiles[i].annotator_id + "' is out of panel order (expected '" +
                              structure.panel[i] + "')");
        }
    }
}

} // namespace detail

// P(pattern | class): the orthant of the latent MVN selected by the observed
// labels. Missing annotators are marginalised by dropping their coordinates.
inline double pattern_likelihood(const AnnotationPattern& pattern, TrueClass cls,
                                 std::span<const AnnotatorProfile> profiles, const CorrelationStructure& structure,
                                 std::uint64_t seed, double accuracy = 1e-3) {
    detail::check_alignment(pattern, profiles, structure);
    std::vector<std::size_t> keep;
    OrthantSpec spec;
    spec.accuracy = accuracy;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == Label::Missing) continue;
        keep.push_back(i);
        spec.thresholds.push_back(profiles[i].threshold(cls));
        spec.sides.push_back(pattern[i] == Label::Positive ? Side::Above : Side::Below);
    }
    if (keep.empty()) throw DomainError("pattern_likelihood: every annotation in the pattern is missing");
    return mvn_orthant_prob(spec, structure.matrix(cls).restricted(keep), seed);
}

// Bayes' rule with both likelihoods floored at 1e-300.
inline double posterior_from_likelihoods(double prevalence, double l_expert, double l_non_expert) {
    if (!(prevalence >= 0.0 && prevalence <= 1.0)) throw DomainError("prevalence must lie in [0, 1]");
    const double l1 = std::max(l_expert, kLikelihoodFloor);
    const double l0 = std::max(l_non_expert, kLikelihoodFloor);
    const double num = prevalence * l1;
    const double den = num + (1.0 - prevalence) * l0;
    return den > 0.0 ? num / den : prevalence;
}

inline double posterior_prob(const AnnotationPattern& pattern, double prevalence,
                             std::span<const AnnotatorProfile> profiles, const CorrelationStructure& structure,
                             std::uint64_t seed, double accuracy = 1e-3) {
    if (!(prevalence > 0.0 && prevalence < 1.0)) throw DomainError("posterior_prob: prevalence must lie in (0, 1)");
    const double l1 = pattern_likelihood(pattern, TrueClass::Expert, profiles, structure, seed, accuracy);
    const double l0 = pattern_likelihood(pattern, TrueClass::NonExpert, profiles, structure, seed, accuracy);
    return posterior_from_likelihoods(prevalence, l1, l0);
}

// Memoised pattern likelihoods for one (profiles, structure, seed)
// generation. Keyed on availability mask, signs and class; at most
// 2 * 3^panel entries. Concurrent lookups may compute the same entry twice;
// the values are identical by determinism.
class PatternLikelihoodCache {
public:
    PatternLikelihoodCache(std::vector<AnnotatorProfile> profiles, CorrelationStructure structure,
                           std::uint64_t seed, double accuracy = 1e-3)
        : profiles_(std::move(profiles)), structure_(std::move(structure)), seed_(seed), accuracy_(accuracy) {
        if (profiles_.size() != structure_.panel.size()) {
            throw DomainError("PatternLikelihoodCache: profiles do not match the panel");
        }
        if (structure_.panel.size() > kMaxOrthantDim) {
            throw DomainError("PatternLikelihoodCache: panels above 16 annotators are unsupported");
        }
    }

    PatternLikelihoodCache(const PatternLikelihoodCache&) = delete;
    PatternLikelihoodCache& operator=(const PatternLikelihoodCache&) = delete;

    double likelihood(const AnnotationPattern& pattern, TrueClass cls) const {
        const std::uint64_t key = encode(pattern, cls);
        {
            std::lock_guard lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        const double value = pattern_likelihood(pattern, cls, profiles_, structure_, seed_, accuracy_);
        std::lock_guard lock(mutex_);
        table_.insert_or_assign(key, value);
        return value;
    }

    double posterior(const AnnotationPattern& pattern, double prevalence) const {
        return posterior_from_likelihoods(prevalence, likelihood(pattern, TrueClass::Expert),
                                          likelihood(pattern, TrueClass::NonExpert));
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return table_.size();
    }

    const std::vector<AnnotatorProfile>& profiles() const noexcept { return profiles_; }
    const CorrelationStructure& structure() const noexcept { return structure_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double accuracy() const noexcept { return accuracy_; }

private:
    std::uint64_t encode(const AnnotationPattern& pattern, TrueClass cls) const {
        if (pattern.size() != profiles_.size()) throw DomainError("pattern does not match the annotator panel");
        std::uint64_t key = 0;
        for (Label l : pattern.values) key = key * 3 + static_cast<std::uint64_t>(l);
        return key * 2 + static_cast<std::uint64_t>(cls);
    }

    std::vector<AnnotatorProfile> profiles_;
    CorrelationStructure structure_;
    std::uint64_t seed_;
    double accuracy_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::uint64_t, double> table_;
};

struct CompanyPosteriors {
    std::vector<double> posteriors;
    // Employees with no annotations at all; they carry the prior prevalence.
    std::size_t all_missing = 0;
};

inline CompanyPosteriors company_posteriors(std::span<const AnnotationPattern> employees, double prevalence,
                                            const PatternLikelihoodCache& cache) {
    if (employees.empty()) throw DomainError("company_posteriors: no employees");
    if (!(prevalence > 0.0 && prevalence < 1.0)) {
        throw DomainError("company_posteriors: prevalence must lie in (0, 1)");
    }
    CompanyPosteriors out;
    out.posteriors.reserve(employees.size());
    for (const auto& e : employees) {
        if (e.all_missing()) {
            out.posteriors.push_back(prevalence);
            ++out.all_missing;
        } else {
            out.posteriors.push_back(cache.posterior(e, prevalence));
        }
    }
    return out;
}

inline CompanyPosteriors company_posteriors(std::span<const AnnotationPattern> employees, double prevalence,
                                            std::span<const AnnotatorProfile> profiles,
                                            const CorrelationStructure& structure, std::uint64_t seed,
                                            double accuracy = 1e-3) {
    const PatternLikelihoodCache cache({profiles.begin(), profiles.end()}, structure, seed, accuracy);
    return company_posteriors(employees, prevalence, cache);
}

// One Bernoulli draw per employee.
inline std::uint64_t realize_headcount(std::span<const double> posteriors, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uint64_t count = 0;
    for (double p : posteriors) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("realize_headcount: posterior outside [0, 1]");
        count += unif(rng) < p;
    }
    return count;
}

// Fused posterior for every validation record, using the record set's own
// calibration (no hold-out). Records with no annotations get the prevalence.
inline std::vector<double> validation_posteriors(const ValidationSet& validation, const Calibration& calibration,
                                                 double prevalence, std::uint64_t seed, double accuracy = 1e-3) {
    const PatternLikelihoodCache cache(calibration.profiles, calibration.structure, seed, accuracy);
    std::vector<std::size_t> cols;
    for (const auto& id : calibration.structure.panel) cols.push_back(validation.column(id));
    std::vector<double> out;
    out.reserve(validation.records.size());
    for (const auto& r : validation.records) {
        AnnotationPattern p;
        p.values.reserve(cols.size());
        for (std::size_t c : cols) p.values.push_back(r.annotations[c]);
        out.push_back(p.all_missing() ? prevalence : cache.posterior(p, prevalence));
    }
    return out;
}

} // namespace probitfuse
