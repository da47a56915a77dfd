#pragma once
// Annotator confusion profiles, tetrachoric correlation structure and
// diagnostic metrics, all estimated from a gold-labelled validation set.

#include "probitfuse/errors.hpp"
#include "probitfuse/numerics.hpp"
#include "probitfuse/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace probitfuse {

// Error rates of one annotator and the probit thresholds they imply:
// the annotator says "positive" when its latent score exceeds tau_pos
// (true experts) or tau_neg (true non-experts).
struct AnnotatorProfile {
    std::string annotator_id;
    double sensitivity = 0.5;
    double specificity = 0.5;
    double tau_pos = 0.0;
    double tau_neg = 0.0;

    double threshold(TrueClass c) const noexcept { return c == TrueClass::Expert ? tau_pos : tau_neg; }
};

inline AnnotatorProfile make_profile(std::string annotator_id, double sensitivity, double specificity) {
    if (!(sensitivity > 0.0 && sensitivity < 1.0) || !(specificity > 0.0 && specificity < 1.0)) {
        throw DomainError("annotator '" + annotator_id + "': sensitivity and specificity must lie in (0, 1)");
    }
    AnnotatorProfile p;
    p.annotator_id = std::move(annotator_id);
    p.sensitivity = sensitivity;
    p.specificity = specificity;
    p.tau_pos = std_normal_quantile(1.0 - sensitivity);
    p.tau_neg = std_normal_quantile(specificity);
    return p;
}

// Class-conditional latent correlations over an ordered annotator panel.
struct CorrelationStructure {
    std::vector<std::string> panel;
    CorrelationMatrix r_pos;
    CorrelationMatrix r_neg;

    static CorrelationStructure independent(std::vector<std::string> panel) {
        const std::size_t n = panel.size();
        return {std::move(panel), CorrelationMatrix(n), CorrelationMatrix(n)};
    }

    const CorrelationMatrix& matrix(TrueClass c) const noexcept { return c == TrueClass::Expert ? r_pos : r_neg; }
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;

    std::size_t positives() const noexcept { return tp + fn; }
    std::size_t negatives() const noexcept { return tn + fp; }
};

struct DiagnosticReport {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
    double lr_pos = 0.0;
    double lr_neg = 0.0;
};

// Non-missing annotations of one annotator scored against gold.
inline ConfusionCounts count_confusion(const ValidationSet& validation, const std::string& annotator_id) {
    const std::size_t col = validation.column(annotator_id);
    if (col == validation.panel.size()) {
        throw CalibrationError("annotator '" + annotator_id + "' is not present in the validation data");
    }
    ConfusionCounts c;
    for (const auto& r : validation.records) {
        const Label l = r.annotations[col];
        if (l == Label::Missing) continue;
        if (r.gold == TrueClass::Expert) {
            (l == Label::Positive ? c.tp : c.fn) += 1;
        } else {
            (l == Label::Negative ? c.tn : c.fp) += 1;
        }
    }
    return c;
}

// Sensitivity and specificity clamped to [0.5/n, 1 - 0.5/n] per gold class.
inline AnnotatorProfile estimate_confusion(const ValidationSet& validation, const std::string& annotator_id) {
    const ConfusionCounts c = count_confusion(validation, annotator_id);
    if (c.positives() == 0 || c.negatives() == 0) {
        throw CalibrationError("annotator '" + annotator_id +
                               "' has no non-missing annotations in one gold class (" +
                               std::to_string(c.positives()) + " expert, " + std::to_string(c.negatives()) +
                               " non-expert)");
    }
    const auto clamp_rate = [](std::size_t hits, std::size_t n) {
        const double total = static_cast<double>(n);
        const double half = 0.5 / total;
        return std::clamp(static_cast<double>(hits) / total, half, 1.0 - half);
    };
    return make_profile(annotator_id, clamp_rate(c.tp, c.positives()), clamp_rate(c.tn, c.negatives()));
}

inline DiagnosticReport diagnostic_metrics(double sensitivity, double specificity, std::size_t n_pos,
                                           std::size_t n_neg) {
    if (n_pos == 0 || n_neg == 0) throw DomainError("diagnostic_metrics: class counts must be positive");
    DiagnosticReport d;
    d.sensitivity = sensitivity;
    d.specificity = specificity;
    d.accuracy = (sensitivity * static_cast<double>(n_pos) + specificity * static_cast<double>(n_neg)) /
                 static_cast<double>(n_pos + n_neg);
    d.lr_pos = sensitivity / (1.0 - specificity);
    d.lr_neg = (1.0 - sensitivity) / specificity;
    return d;
}

inline DiagnosticReport diagnostic_metrics(const AnnotatorProfile& profile, std::size_t n_pos, std::size_t n_neg) {
    return diagnostic_metrics(profile.sensitivity, profile.specificity, n_pos, n_neg);
}

inline DiagnosticReport diagnostic_metrics(const ConfusionCounts& c) {
    if (c.positives() == 0 || c.negatives() == 0) {
        throw DomainError("diagnostic_metrics: class counts must be positive");
    }
    return diagnostic_metrics(static_cast<double>(c.tp) / static_cast<double>(c.positives()),
                              static_cast<double>(c.tn) / static_cast<double>(c.negatives()), c.positives(),
                              c.negatives());
}

// Joint counts of two binary annotators: first index is annotator A, second B.
struct ContingencyTable {
    double pos_pos = 0.0;
    double pos_neg = 0.0;
    double neg_pos = 0.0;
    double neg_neg = 0.0;

    double total() const noexcept { return pos_pos + pos_neg + neg_pos + neg_neg; }
};

// Latent correlation of a bivariate probit reproducing the table's margins
// and both-positive cell. Zero cells get +0.5; the result is clamped to
// [-0.999, 0.999].
inline double tetrachoric(ContingencyTable t) {
    for (double v : {t.pos_pos, t.pos_neg, t.neg_pos, t.neg_neg}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("tetrachoric: counts must be finite and nonnegative");
    }
    if (t.total() <= 0.0) throw DegenerateTableError("tetrachoric: empty table");
    for (double* v : {&t.pos_pos, &t.pos_neg, &t.neg_pos, &t.neg_neg}) {
        if (*v == 0.0) *v = 0.5;
    }
    const double n = t.total();
    const double p_a = (t.pos_pos + t.pos_neg) / n;
    const double p_b = (t.pos_pos + t.neg_pos) / n;
    if (!(p_a > 0.0 && p_a < 1.0 && p_b > 0.0 && p_b < 1.0)) {
        throw DegenerateTableError("tetrachoric: a row or column margin is zero");
    }
    // Positive when the latent score exceeds the threshold.
    const double h = std_normal_quantile(1.0 - p_a);
    const double k = std_normal_quantile(1.0 - p_b);
    const double target = t.pos_pos / n;
    const auto f = [&](double rho) { return bvn_cdf(-h, -k, rho) - target; };

    double lo = -kCorrelationClamp;
    double hi = kCorrelationClamp;
    if (f(lo) >= 0.0) return lo;
    if (f(hi) <= 0.0) return hi;
    double mid = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double v = f(mid);
        if (std::fabs(v) <= 1e-12 || hi - lo < 1e-15) break;
        (v < 0.0 ? lo : hi) = mid;
    }
    return mid;
}

inline const char* class_name(TrueClass c) noexcept { return c == TrueClass::Expert ? "expert" : "non-expert"; }

namespace detail {

inline CorrelationMatrix pairwise_tetrachoric(const ValidationSet& validation, std::span<const std::size_t> cols,
                                              std::span<const std::string> panel, const TrueClass* only,
                                              const char* context) {
    const std::size_t n = cols.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            ContingencyTable t;
            for (const auto& r : validation.records) {
                if (only != nullptr && r.gold != *only) continue;
                const Label x = r.annotations[cols[a]];
                const Label y = r.annotations[cols[b]];
                if (x == Label::Missing || y == Label::Missing) continue;
                if (x == Label::Positive) {
                    (y == Label::Positive ? t.pos_pos : t.pos_neg) += 1.0;
                } else {
                    (y == Label::Positive ? t.neg_pos : t.neg_neg) += 1.0;
                }
            }
            double rho;
            try {
                rho = tetrachoric(t);
            } catch (const DegenerateTableError& e) {
                throw DegenerateTableError("annotators '" + panel[a] + "' and '" + panel[b] + "' (" + context +
                                           "): " + e.what());
            }
            const auto i = static_cast<Eigen::Index>(a);
            const auto j = static_cast<Eigen::Index>(b);
            m(i, j) = m(j, i) = std::clamp(rho, -kCorrelationClamp, kCorrelationClamp);
        }
    }
    return nearest_correlation(m);
}

} // namespace detail

// Class-conditional tetrachoric matrices. A class with fewer than
// min_class_count records uses the matrix pooled over all records.
// Missing annotations are dropped pairwise.
inline CorrelationStructure build_correlation_structure(const ValidationSet& validation,
                                                        std::vector<std::string> panel,
                                                        std::size_t min_class_count = 30) {
    if (panel.empty()) throw DomainError("build_correlation_structure: empty panel");
    std::vector<std::size_t> cols;
    cols.reserve(panel.size());
    for (const auto& id : panel) {
        const std::size_t c = validation.column(id);
        if (c == validation.panel.size()) {
            throw CalibrationError("annotator '" + id + "' is not present in the validation data");
        }
        cols.push_back(c);
    }

    const bool pos_ok = validation.count(TrueClass::Expert) >= min_class_count;
    const bool neg_ok = validation.count(TrueClass::NonExpert) >= min_class_count;
    std::optional<CorrelationMatrix> pooled;
    const auto pooled_matrix = [&]() -> const CorrelationMatrix& {
        if (!pooled) pooled = detail::pairwise_tetrachoric(validation, cols, panel, nullptr, "pooled");
        return *pooled;
    };

    const TrueClass expert = TrueClass::Expert;
    const TrueClass non_expert = TrueClass::NonExpert;
    CorrelationMatrix r_pos =
        pos_ok ? detail::pairwise_tetrachoric(validation, cols, panel, &expert, "expert") : pooled_matrix();
    CorrelationMatrix r_neg =
        neg_ok ? detail::pairwise_tetrachoric(validation, cols, panel, &non_expert, "non-expert") : pooled_matrix();
    return {std::move(panel), std::move(r_pos), std::move(r_neg)};
}

// Profiles plus correlation structure for a panel.
struct Calibration {
    std::vector<AnnotatorProfile> profiles;
    CorrelationStructure structure;
};

inline Calibration calibrate(const ValidationSet& validation, const std::vector<std::string>& panel,
                             std::size_t min_class_count = 30) {
    Calibration out;
    out.profiles.reserve(panel.size());
    for (const auto& id : panel) out.profiles.push_back(estimate_confusion(validation, id));
    out.structure = build_correlation_structure(validation, panel, min_class_count);
    return out;
}

// Posteriors thresholded at `cut` and scored against gold.
inline DiagnosticReport fused_confusion(const ValidationSet& validation, std::span<const double> posteriors,
                                        double cut = 0.5) {
    if (posteriors.size() != validation.records.size()) {
        throw DomainError("fused_confusion: " + std::to_string(posteriors.size()) + " posteriors for " +
                          std::to_string(validation.records.size()) + " records");
    }
    if (!(cut > 0.0 && cut < 1.0)) throw DomainError("fused_confusion: cut must lie in (0, 1)");
    ConfusionCounts c;
    for (std::size_t i = 0; i < posteriors.size(); ++i) {
        const bool called = posteriors[i] >= cut;
        if (validation.records[i].gold == TrueClass::Expert) {
            (called ? c.tp : c.fn) += 1;
        } else {
            (called ? c.fp : c.tn) += 1;
        }
    }
    return diagnostic_metrics(c);
}

} // namespace probitfuse
