#pragma once
// Annotation data shared by every stage of the pipeline.

#include "probitfuse/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace probitfuse {

// One annotator's verdict on one record.
enum class Label : std::uint8_t { Negative, Positive, Missing };

// Latent truth: is the person an ML expert.
enum class TrueClass : std::uint8_t { NonExpert, Expert };

// A record's labels, aligned to the annotator panel.
struct AnnotationPattern {
    std::vector<Label> values;

    AnnotationPattern() = default;
    explicit AnnotationPattern(std::vector<Label> v) : values(std::move(v)) {}
    AnnotationPattern(std::initializer_list<Label> v) : values(v) {}

    std::size_t size() const noexcept { return values.size(); }
    Label operator[](std::size_t i) const { return values[i]; }

    std::size_t observed() const noexcept {
        std::size_t n = 0;
        for (Label l : values) n += l != Label::Missing;
        return n;
    }

    bool all_missing() const noexcept { return observed() == 0; }

    friend bool operator==(const AnnotationPattern&, const AnnotationPattern&) = default;
};

struct ValidationRecord {
    std::string record_id;
    TrueClass gold = TrueClass::NonExpert;
    AnnotationPattern annotations;
};

// Gold-labelled records. `panel` names the annotator columns in order.
struct ValidationSet {
    std::vector<std::string> panel;
    std::vector<ValidationRecord> records;

    std::size_t count(TrueClass c) const noexcept {
        std::size_t n = 0;
        for (const auto& r : records) n += r.gold == c;
        return n;
    }

    // Index of an annotator in the panel, or panel.size() when absent.
    std::size_t column(const std::string& annotator_id) const noexcept {
        for (std::size_t i = 0; i < panel.size(); ++i) {
            if (panel[i] == annotator_id) return i;
        }
        return panel.size();
    }

    void validate() const {
        std::unordered_set<std::string> seen;
        for (const auto& r : records) {
            if (!seen.insert(r.record_id).second) throw DomainError("duplicate record_id '" + r.record_id + "'");
            if (r.annotations.size() != panel.size()) {
                throw DomainError("record '" + r.record_id + "' does not match the annotator panel");
            }
        }
        if (count(TrueClass::Expert) == 0 || count(TrueClass::NonExpert) == 0) {
            throw DomainError("validation set needs at least one record of each gold class");
        }
    }
};

} // namespace probitfuse
