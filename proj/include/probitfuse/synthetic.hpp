#pragma once
// Employee-level annotations synthesised from aggregate keyword-filter counts
// through a Gaussian copula, and the downward adjustment applied to
// headcounts estimated that way.

#include "probitfuse/calibration.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/numerics.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace probitfuse {

// Company-level counts from keyword filters only.
struct AggregateCounts {
    std::string company_id;
    std::uint64_t total_headcount = 0;
    std::map<std::string, std::uint64_t> filter_counts;
};

struct SyntheticConfig {
    double adjustment = 0.5;
    std::uint64_t copula_seed = 0;
};

// Positive-label prevalence of each filter, clamped to 1 (with a warning)
// when a rounded platform count exceeds the headcount.
inline std::map<std::string, double> filter_prevalences(const AggregateCounts& agg, Warnings* warnings = nullptr) {
    if (agg.total_headcount == 0) throw DomainError("company '" + agg.company_id + "': total headcount is zero");
    if (agg.filter_counts.empty()) throw DomainError("company '" + agg.company_id + "': no keyword filter counts");
    std::map<std::string, double> out;
    for (const auto& [id, count] : agg.filter_counts) {
        double p = static_cast<double>(count) / static_cast<double>(agg.total_headcount);
        if (p > 1.0) {
            warn(warnings, "company '" + agg.company_id + "': filter '" + id + "' count " + std::to_string(count) +
                               " exceeds headcount " + std::to_string(agg.total_headcount) +
                               "; prevalence clamped to 1");
            p = 1.0;
        }
        out.emplace(id, p);
    }
    return out;
}

// Draws latent vectors from N(0, R), R being the non-expert matrix
// restricted to the company's filters; a filter fires when its coordinate
// exceeds Phi^{-1}(1 - p_f). Annotators without a count stay missing.
class CopulaSampler {
public:
    CopulaSampler(const AggregateCounts& agg, const CorrelationStructure& structure, Warnings* warnings = nullptr)
        : panel_size_(structure.panel.size()) {
        for (const auto& [id, p] : filter_prevalences(agg, warnings)) {
            std::size_t col = structure.panel.size();
            for (std::size_t i = 0; i < structure.panel.size(); ++i) {
                if (structure.panel[i] == id) col = i;
            }
            if (col == structure.panel.size()) {
                throw DomainError("company '" + agg.company_id + "': filter '" + id +
                                  "' is not in the annotator panel");
            }
            cols_.push_back(col);
            if (p <= 0.0) {
                cut_.push_back(std::numeric_limits<double>::infinity());
            } else if (p >= 1.0) {
                cut_.push_back(-std::numeric_limits<double>::infinity());
            } else {
                cut_.push_back(std_normal_quantile(1.0 - p));
            }
        }
        chol_ = cholesky_lower(structure.r_neg.restricted(cols_).clamped());
        z_.resize(chol_.rows());
    }

    // Bit j set when the j-th available filter fires.
    std::uint32_t draw_cell(Rng& rng) {
        for (Eigen::Index j = 0; j < z_.size(); ++j) z_(j) = normal_(rng);
        std::uint32_t cell = 0;
        for (Eigen::Index j = 0; j < z_.size(); ++j) {
            const double latent = chol_.row(j).head(j + 1).dot(z_.head(j + 1));
            if (latent > cut_[static_cast<std::size_t>(j)]) cell |= std::uint32_t{1} << j;
        }
        return cell;
    }

    AnnotationPattern pattern(std::uint32_t cell) const {
        AnnotationPattern p(std::vector<Label>(panel_size_, Label::Missing));
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            p.values[cols_[j]] = (cell >> j) & 1U ? Label::Positive : Label::Negative;
        }
        return p;
    }

    // Number of employees per cell among n draws.
    std::vector<std::uint64_t> cell_counts(std::size_t n, Rng& rng) {
        std::vector<std::uint64_t> counts(std::size_t{1} << cols_.size(), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[draw_cell(rng)];
        return counts;
    }

    std::size_t filters() const noexcept { return cols_.size(); }

private:
    std::size_t panel_size_;
    std::vector<std::size_t> cols_;
    std::vector<double> cut_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd z_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// n synthetic employees over structure.panel.
inline std::vector<AnnotationPattern> copula_generate(const AggregateCounts& agg, const CorrelationStructure& structure,
                                                      std::size_t n, Rng& rng, Warnings* warnings = nullptr) {
    CopulaSampler sampler(agg, structure, warnings);
    std::vector<AnnotationPattern> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.pattern(sampler.draw_cell(rng)));
    return out;
}

// Same, seeded from config.copula_seed.
inline std::vector<AnnotationPattern> copula_generate(const AggregateCounts& agg, const CorrelationStructure& structure,
                                                      std::size_t n, const SyntheticConfig& config,
                                                      Warnings* warnings = nullptr) {
    Rng rng = substream(config.copula_seed, Stream::Copula);
    return copula_generate(agg, structure, n, rng, warnings);
}

// Scales each draw and rounds half up.
inline std::vector<std::uint64_t> adjust_headcount_draws(std::span<const std::uint64_t> draws,
                                                         const SyntheticConfig& config) {
    if (!(config.adjustment > 0.0 && config.adjustment <= 1.0)) {
        throw DomainError("synthetic adjustment must lie in (0, 1]");
    }
    std::vector<std::uint64_t> out;
    out.reserve(draws.size());
    for (std::uint64_t d : draws) {
        out.push_back(static_cast<std::uint64_t>(std::floor(static_cast<double>(d) * config.adjustment + 0.5)));
    }
    return out;
}

} // namespace probitfuse
