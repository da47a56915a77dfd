#pragma once
// Fixtures shared by the unit tests.

#include "probitfuse/calibration.hpp"
#include "probitfuse/random.hpp"
#include "probitfuse/simulate.hpp"
#include "probitfuse/types.hpp"

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace probitfuse;

inline Label lab(bool positive) { return positive ? Label::Positive : Label::Negative; }

// Pattern from a string of '1', '0' and '.' (missing).
inline AnnotationPattern pat(const std::string& s) {
    AnnotationPattern p;
    for (char c : s) p.values.push_back(c == '1' ? Label::Positive : c == '0' ? Label::Negative : Label::Missing);
    return p;
}

inline ValidationRecord rec(std::string id, bool expert, const std::string& labels) {
    return {std::move(id), expert ? TrueClass::Expert : TrueClass::NonExpert, pat(labels)};
}

// Validation set drawn from the latent probit model with exactly `experts`
// gold positives.
inline ValidationSet simulated_validation(std::span<const AnnotatorProfile> profiles,
                                          const CorrelationStructure& structure, std::size_t n,
                                          std::size_t experts, std::uint64_t seed) {
    LatentAnnotator annotate(profiles, structure);
    Rng rng(seed);
    ValidationSet v;
    v.panel = structure.panel;
    for (std::size_t i = 0; i < n; ++i) {
        const TrueClass cls = i < experts ? TrueClass::Expert : TrueClass::NonExpert;
        v.records.push_back({"r" + std::to_string(i), cls, annotate.draw(cls, rng)});
    }
    return v;
}

inline std::vector<AnnotatorProfile> default_profiles() { return default_scenario().annotator_profiles; }

inline CorrelationStructure equicorrelated(const std::vector<AnnotatorProfile>& profiles, double rho) {
    std::vector<std::string> panel;
    for (const auto& p : profiles) panel.push_back(p.annotator_id);
    const auto m = CorrelationMatrix::equicorrelated(panel.size(), rho);
    return {panel, m, m};
}

// Scratch directory removed at scope exit.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("probitfuse_" + name + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace fixtures
