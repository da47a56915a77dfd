#pragma once
// File formats: validation sets, employee-level company annotations,
// aggregate keyword counts, prior and scenario configs, estimate reports.

#include "probitfuse/bootstrap.hpp"
#include "probitfuse/calibration.hpp"
#include "probitfuse/csv.hpp"
#include "probitfuse/errors.hpp"
#include "probitfuse/simulate.hpp"
#include "probitfuse/synthetic.hpp"
#include "probitfuse/types.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace probitfuse {

// ---------------------------------------------------------------- labels

inline Label parse_label(const std::string& cell, const csv::Table& t, std::size_t line) {
    if (cell.empty()) return Label::Missing;
    if (cell == "1") return Label::Positive;
    if (cell == "0") return Label::Negative;
    throw ParseError(t.path, line, "annotation must be 1, 0 or empty, got '" + cell + "'");
}

inline std::string label_cell(Label l) {
    switch (l) {
    case Label::Positive: return "1";
    case Label::Negative: return "0";
    case Label::Missing: return "";
    }
    return "";
}

// ------------------------------------------------------------ validation

// Header: record_id, gold, then one column per annotator (any order).
inline ValidationSet load_validation(const std::string& path) {
    const csv::Table t = csv::read(path);
    const std::size_t id_col = t.column("record_id");
    const std::size_t gold_col = t.column("gold");
    if (id_col == t.header.size() || gold_col == t.header.size()) {
        throw ParseError(path, 1, "header must declare record_id and gold columns");
    }
    ValidationSet v;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i == id_col || i == gold_col) continue;
        if (t.header[i].empty()) throw ParseError(path, 1, "empty annotator column name");
        for (const auto& seen : v.panel) {
            if (seen == t.header[i]) throw ParseError(path, 1, "duplicate annotator column '" + seen + "'");
        }
        v.panel.push_back(t.header[i]);
        cols.push_back(i);
    }
    if (v.panel.empty()) throw ParseError(path, 1, "no annotator columns");

    std::set<std::string> ids;
    for (const auto& row : t.rows) {
        const auto& id = row.cells[id_col];
        if (id.empty()) throw ParseError(path, row.line, "empty record_id");
        if (!ids.insert(id).second) throw ParseError(path, row.line, "duplicate record_id '" + id + "'");
        ValidationRecord r;
        r.record_id = id;
        const auto& gold = row.cells[gold_col];
        if (gold == "1") {
            r.gold = TrueClass::Expert;
        } else if (gold == "0") {
            r.gold = TrueClass::NonExpert;
        } else {
            throw ParseError(path, row.line, "gold must be 1 or 0, got '" + gold + "'");
        }
        for (std::size_t c : cols) r.annotations.values.push_back(parse_label(row.cells[c], t, row.line));
        v.records.push_back(std::move(r));
    }
    return v;
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

inline void save_validation(const ValidationSet& v, const std::string& path) {
    auto out = open_for_write(path);
    std::vector<std::string> header{"record_id", "gold"};
    header.insert(header.end(), v.panel.begin(), v.panel.end());
    out << csv::join(header) << '\n';
    for (const auto& r : v.records) {
        std::vector<std::string> cells{r.record_id, r.gold == TrueClass::Expert ? "1" : "0"};
        for (Label l : r.annotations.values) cells.push_back(label_cell(l));
        out << csv::join(cells) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

// ------------------------------------------------------ company records

struct IngestionRules {
    double headcount_ratio_limit = 3.0;
    bool clamp_prevalence = true;
    // Annotators treated as LLM classifiers; ids starting with llm_prefix
    // count as well.
    std::set<std::string> llm_annotators;
    std::string llm_prefix = "llm_";

    bool is_llm(const std::string& id) const {
        return llm_annotators.count(id) != 0 || (!llm_prefix.empty() && id.rfind(llm_prefix, 0) == 0);
    }

    void validate() const {
        if (!(headcount_ratio_limit > 1.0)) throw ConfigError("headcount_ratio_limit must exceed 1");
    }
};

struct LoadedCompany {
    EmployeeCompany company;
    std::size_t rows = 0;
    std::optional<std::uint64_t> reported_headcount;
    // LLM columns were blanked because rows and reported headcount disagree
    // by more than the ratio limit.
    bool llm_dropped = false;
};

// Header: company_id, employee_id, then annotator columns that must be part
// of `panel`; annotators absent from the file are missing for everyone.
// Companies keep first-appearance order.
inline std::vector<LoadedCompany> load_company_annotations(const std::string& path,
                                                           const std::vector<std::string>& panel,
                                                           const IngestionRules& rules,
                                                           const std::map<std::string, std::uint64_t>& reported,
                                                           Warnings* warnings = nullptr) {
    rules.validate();
    const csv::Table t = csv::read(path);
    const std::size_t company_col = t.column("company_id");
    const std::size_t employee_col = t.column("employee_id");
    if (company_col == t.header.size() || employee_col == t.header.size()) {
        throw ParseError(path, 1, "header must declare company_id and employee_id columns");
    }
    // file column -> panel index
    std::vector<std::pair<std::size_t, std::size_t>> mapping;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i == company_col || i == employee_col) continue;
        std::size_t p = panel.size();
        for (std::size_t j = 0; j < panel.size(); ++j) {
            if (panel[j] == t.header[i]) p = j;
        }
        if (p == panel.size()) {
            throw ParseError(path, 1, "annotator column '" + t.header[i] + "' is not in the calibration panel");
        }
        mapping.emplace_back(i, p);
    }

    std::vector<LoadedCompany> out;
    std::map<std::string, std::size_t> index;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : t.rows) {
        const auto& cid = row.cells[company_col];
        const auto& eid = row.cells[employee_col];
        if (cid.empty() || eid.empty()) throw ParseError(path, row.line, "empty company_id or employee_id");
        if (!seen.emplace(cid, eid).second) {
            throw ParseError(path, row.line, "duplicate employee '" + eid + "' in company '" + cid + "'");
        }
        auto [it, fresh] = index.try_emplace(cid, out.size());
        if (fresh) {
            out.push_back({});
            out.back().company.company_id = cid;
        }
        AnnotationPattern p(std::vector<Label>(panel.size(), Label::Missing));
        for (const auto& [file_col, panel_col] : mapping) p.values[panel_col] = parse_label(row.cells[file_col], t, row.line);
        out[it->second].company.employees.push_back(std::move(p));
        out[it->second].rows += 1;
    }

    for (auto& c : out) {
        const auto r = reported.find(c.company.company_id);
        if (r == reported.end() || r->second == 0) {
            warn(warnings, "company '" + c.company.company_id +
                               "': no reported headcount, headcount ratio rule not applied");
            continue;
        }
        c.reported_headcount = r->second;
        const double rows = static_cast<double>(c.rows);
        const double rep = static_cast<double>(r->second);
        const double ratio = std::max(rows / rep, rep / rows);
        if (ratio > rules.headcount_ratio_limit) {
            c.llm_dropped = true;
            for (auto& e : c.company.employees) {
                for (std::size_t j = 0; j < panel.size(); ++j) {
                    if (rules.is_llm(panel[j])) e.values[j] = Label::Missing;
                }
            }
            warn(warnings, "company '" + c.company.company_id + "': " + std::to_string(c.rows) +
                               " annotated rows vs reported headcount " + std::to_string(r->second) +
                               " exceeds ratio limit; LLM annotations dropped, flagged for synthetic comparison");
        }
    }
    return out;
}

// ------------------------------------------------------------ aggregates

struct AggregateRecord {
    AggregateCounts counts;
    std::optional<OrgType> org_type;
};

// Header: company_id, total_headcount, optional org_type, then one column
// per keyword filter. An empty filter cell means the count is unavailable.
inline std::vector<AggregateRecord> load_aggregates(const std::string& path, const IngestionRules& rules = {}) {
    const csv::Table t = csv::read(path);
    const std::size_t id_col = t.column("company_id");
    const std::size_t total_col = t.column("total_headcount");
    const std::size_t org_col = t.column("org_type");
    if (id_col == t.header.size() || total_col == t.header.size()) {
        throw ParseError(path, 1, "header must declare company_id and total_headcount columns");
    }
    std::vector<AggregateRecord> out;
    std::set<std::string> ids;
    for (const auto& row : t.rows) {
        AggregateRecord rec;
        rec.counts.company_id = row.cells[id_col];
        if (rec.counts.company_id.empty()) throw ParseError(path, row.line, "empty company_id");
        if (!ids.insert(rec.counts.company_id).second) {
            throw ParseError(path, row.line, "duplicate company_id '" + rec.counts.company_id + "'");
        }
        rec.counts.total_headcount = csv::parse_count(row.cells[total_col], t, row.line, "total_headcount");
        if (rec.counts.total_headcount == 0) throw ParseError(path, row.line, "total_headcount must be positive");
        if (org_col != t.header.size() && !row.cells[org_col].empty()) {
            try {
                rec.org_type = parse_org_type(row.cells[org_col]);
            } catch (const ConfigError& e) {
                throw ParseError(path, row.line, e.what());
            }
        }
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (i == id_col || i == total_col || i == org_col || row.cells[i].empty()) continue;
            const auto count = csv::parse_count(row.cells[i], t, row.line, t.header[i]);
            if (count > rec.counts.total_headcount && !rules.clamp_prevalence) {
                throw ParseError(path, row.line, "filter '" + t.header[i] + "' count exceeds total_headcount");
            }
            rec.counts.filter_counts.emplace(t.header[i], count);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------- priors

inline PriorSpec prior_from_json(const nlohmann::json& j, const std::string& where, Warnings* warnings) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    static const std::set<std::string> known{"org_type", "size_band", "alpha", "beta"};
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) warn(warnings, where + ": ignoring unknown key '" + key + "'");
    }
    for (const char* key : {"org_type", "size_band", "alpha", "beta"}) {
        if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    }
    if (!j["alpha"].is_number() || !j["beta"].is_number()) throw ConfigError(where + ": alpha and beta must be numbers");
    PriorSpec p;
    p.org_type = parse_org_type(j["org_type"].get<std::string>());
    p.size_band = parse_size_band(j["size_band"].get<std::string>());
    p.alpha = j["alpha"].get<double>();
    p.beta = j["beta"].get<double>();
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw ConfigError(where + ": alpha and beta must be positive");
    return p;
}

inline nlohmann::json priors_to_json(std::span<const PriorSpec> priors) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : priors) {
        arr.push_back({{"org_type", std::string(to_string(p.org_type))},
                       {"size_band", std::string(to_string(p.size_band))},
                       {"alpha", p.alpha},
                       {"beta", p.beta}});
    }
    return {{"priors", arr}};
}

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// {"priors": [{"org_type", "size_band", "alpha", "beta"}, ...]}. An empty
// path or a file that does not exist yields default_priors().
inline std::vector<PriorSpec> load_priors(const std::string& path, Warnings* warnings = nullptr) {
    if (path.empty()) return default_priors();
    if (!std::filesystem::exists(path)) {
        warn(warnings, "priors file '" + path + "' not found; using default priors");
        return default_priors();
    }
    const auto j = read_json(path);
    if (!j.is_object() || !j.contains("priors") || !j["priors"].is_array()) {
        throw ConfigError(path + ": expected an object with a 'priors' array");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "priors") warn(warnings, path + ": ignoring unknown key '" + key + "'");
    }
    std::vector<PriorSpec> out;
    for (std::size_t i = 0; i < j["priors"].size(); ++i) {
        try {
            out.push_back(prior_from_json(j["priors"][i], path + ": priors[" + std::to_string(i) + "]", warnings));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ": priors[" + std::to_string(i) + "]: " + e.what());
        }
    }
    if (out.empty()) throw ConfigError(path + ": no priors");
    return out;
}

// -------------------------------------------------------------- scenario

// JSON scenario. Required: "annotators" [{id, sensitivity, specificity}].
// Correlations come from "correlation" (equicorrelation in both classes) or
// explicit "r_pos"/"r_neg" matrices; default 0.
// A "seed" key overrides `default_seed`.
inline SimulationScenario load_scenario(const std::string& path, std::uint64_t default_seed = 0,
                                        Warnings* warnings = nullptr) {
    const auto j = read_json(path);
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    static const std::set<std::string> known{"n_companies",   "employees_min", "employees_max",
                                             "prevalence",    "annotators",    "correlation",
                                             "r_pos",         "r_neg",         "validation_size",
                                             "validation_prevalence",          "prior",
                                             "seed"};
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) warn(warnings, path + ": ignoring unknown key '" + key + "'");
    }
    SimulationScenario s;
    s.seed = default_seed;
    const auto field = [&](const char* key) -> const nlohmann::json* {
        return j.contains(key) ? &j[key] : nullptr;
    };
    const auto count = [&](const char* key, std::size_t& dst) {
        if (const auto* v = field(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(path + ": '" + key + "' must be a nonnegative integer");
            dst = v->get<std::size_t>();
        }
    };
    const auto real = [&](const char* key, double& dst) {
        if (const auto* v = field(key)) {
            if (!v->is_number()) throw ConfigError(path + ": '" + key + "' must be a number");
            dst = v->get<double>();
        }
    };
    count("n_companies", s.n_companies);
    count("employees_min", s.employees_min);
    count("employees_max", s.employees_max);
    count("validation_size", s.validation_size);
    real("prevalence", s.true_prevalence);
    real("validation_prevalence", s.validation_prevalence);
    if (const auto* v = field("seed")) {
        if (!v->is_number_unsigned()) throw ConfigError(path + ": 'seed' must be a nonnegative integer");
        s.seed = v->get<std::uint64_t>();
    }

    const auto* annotators = field("annotators");
    if (annotators == nullptr || !annotators->is_array() || annotators->empty()) {
        throw ConfigError(path + ": 'annotators' must be a nonempty array");
    }
    std::vector<std::string> panel;
    for (std::size_t i = 0; i < annotators->size(); ++i) {
        const auto& a = (*annotators)[i];
        const std::string where = path + ": annotators[" + std::to_string(i) + "]";
        if (!a.is_object() || !a.contains("id") || !a.contains("sensitivity") || !a.contains("specificity")) {
            throw ConfigError(where + ": needs 'id', 'sensitivity' and 'specificity'");
        }
        try {
            s.annotator_profiles.push_back(make_profile(a["id"].get<std::string>(), a["sensitivity"].get<double>(),
                                                        a["specificity"].get<double>()));
        } catch (const DomainError& e) {
            throw ConfigError(where + ": " + e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where + ": " + e.what());
        }
        panel.push_back(s.annotator_profiles.back().annotator_id);
    }

    const auto matrix = [&](const char* key) -> std::optional<CorrelationMatrix> {
        const auto* v = field(key);
        if (v == nullptr) return std::nullopt;
        const std::size_t n = panel.size();
        if (!v->is_array() || v->size() != n) throw ConfigError(path + ": '" + key + "' must be an n x n array");
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            const auto& row = (*v)[r];
            if (!row.is_array() || row.size() != n) throw ConfigError(path + ": '" + key + "' must be an n x n array");
            for (std::size_t c = 0; c < n; ++c) {
                if (!row[c].is_number()) throw ConfigError(path + ": '" + key + "' entries must be numbers");
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
            }
        }
        try {
            return CorrelationMatrix(std::move(m));
        } catch (const DomainError& e) {
            throw ConfigError(path + ": '" + key + "': " + e.what());
        }
    };
    double rho = 0.0;
    real("correlation", rho);
    if (!(rho > -1.0 && rho < 1.0)) throw ConfigError(path + ": 'correlation' must lie in (-1, 1)");
    const auto equi = CorrelationMatrix::equicorrelated(panel.size(), rho);
    s.structure = {panel, matrix("r_pos").value_or(equi), matrix("r_neg").value_or(equi)};

    if (const auto* p = field("prior")) {
        if (!p->is_object() || !p->contains("alpha") || !p->contains("beta") || !(*p)["alpha"].is_number() ||
            !(*p)["beta"].is_number()) {
            throw ConfigError(path + ": 'prior' needs numeric 'alpha' and 'beta'");
        }
        s.prior = PriorSpec{OrgType::Unknown, SizeBand::Unknown, (*p)["alpha"].get<double>(),
                            (*p)["beta"].get<double>()};
    }
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return s;
}

// ---------------------------------------------------------------- report

inline const std::vector<std::string>& report_header() {
    static const std::vector<std::string> h{"company_id", "n_employees", "mean",     "q10",    "q50",
                                            "q90",        "ml_pct_q50",  "category", "method", "marker"};
    return h;
}

// Shortest representation that parses back to the same double.
inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, ptr);
}

inline double ml_pct(std::uint64_t count, std::uint64_t n) {
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(n);
}

inline std::vector<std::string> report_row(const EstimateSummary& s) {
    return {s.company_id,
            std::to_string(s.n_employees),
            format_real(s.mean),
            std::to_string(s.q10),
            std::to_string(s.q50),
            std::to_string(s.q90),
            format_fixed(ml_pct(s.q50, s.n_employees), 2),
            std::string(to_string(s.category)),
            std::string(to_string(s.method)),
            s.method == EstimateMethod::Synthetic ? "*" : ""};
}

// One row per company then the AGGREGATE row. Synthetic rows carry "*" in
// the marker column.
inline void write_report(std::span<const EstimateSummary> estimates, const EstimateSummary& aggregate,
                         const std::string& path) {
    auto out = open_for_write(path);
    out << csv::join(report_header()) << '\n';
    for (const auto& s : estimates) out << csv::join(report_row(s)) << '\n';
    out << csv::join(report_row(aggregate)) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline EstimateSummary empty_aggregate() {
    EstimateSummary s;
    s.company_id = "AGGREGATE";
    s.method = EstimateMethod::Portfolio;
    return s;
}

inline void write_report(std::span<const CompanyEstimate> estimates, const std::string& path) {
    std::vector<EstimateSummary> rows;
    std::uint64_t employees = 0;
    for (const auto& e : estimates) {
        rows.push_back(e.summary);
        employees += e.summary.n_employees;
    }
    const auto matrix = draws_by_iteration(estimates);
    const EstimateSummary agg = matrix.empty() ? empty_aggregate() : aggregate_portfolio(matrix, employees);
    write_report(rows, agg, path);
}

struct Report {
    std::vector<EstimateSummary> rows;
    EstimateSummary aggregate;
};

inline Report read_report(const std::string& path) {
    const csv::Table t = csv::read(path);
    if (t.header != report_header()) throw ParseError(path, 1, "unexpected report header");
    Report r;
    bool have_aggregate = false;
    for (const auto& row : t.rows) {
        EstimateSummary s;
        s.company_id = row.cells[0];
        s.n_employees = csv::parse_count(row.cells[1], t, row.line, "n_employees");
        s.mean = csv::parse_real(row.cells[2], t, row.line, "mean");
        s.q10 = csv::parse_count(row.cells[3], t, row.line, "q10");
        s.q50 = csv::parse_count(row.cells[4], t, row.line, "q50");
        s.q90 = csv::parse_count(row.cells[5], t, row.line, "q90");
        try {
            s.category = parse_category(row.cells[7]);
            s.method = parse_method(row.cells[8]);
        } catch (const DomainError& e) {
            throw ParseError(path, row.line, e.what());
        }
        if (s.method == EstimateMethod::Portfolio) {
            if (have_aggregate) throw ParseError(path, row.line, "more than one AGGREGATE row");
            r.aggregate = std::move(s);
            have_aggregate = true;
        } else {
            r.rows.push_back(std::move(s));
        }
    }
    if (!have_aggregate) throw ParseError(path, t.rows.empty() ? 1 : t.rows.back().line, "missing AGGREGATE row");
    return r;
}

// Human-readable table in the "q50 (q10 - q90)" style.
inline std::string render_report(const Report& r) {
    std::ostringstream out;
    const auto line = [&](const EstimateSummary& s) {
        std::string interval = std::to_string(s.q50) + " (" + std::to_string(s.q10) + " - " +
                               std::to_string(s.q90) + ")";
        if (s.method == EstimateMethod::Synthetic) interval += " *";
        const std::string pct = format_fixed(ml_pct(s.q50, s.n_employees), 2) + "% (" +
                                format_fixed(ml_pct(s.q10, s.n_employees), 2) + "% - " +
                                format_fixed(ml_pct(s.q90, s.n_employees), 2) + "%)";
        char buf[512];
        std::snprintf(buf, sizeof buf, "%-32s %10llu  %-20s %-26s %s\n", s.company_id.c_str(),
                      static_cast<unsigned long long>(s.n_employees), interval.c_str(), pct.c_str(),
                      std::string(to_string(s.category)).c_str());
        out << buf;
    };
    char head[256];
    std::snprintf(head, sizeof head, "%-32s %10s  %-20s %-26s %s\n", "Company", "Staff", "q50 (q10 - q90)",
                  "% of total", "Category");
    out << head;
    for (const auto& s : r.rows) line(s);
    line(r.aggregate);
    return out.str();
}

// ----------------------------------------------------- calibration report

inline nlohmann::json matrix_json(const CorrelationMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json diagnostics_json(const DiagnosticReport& d) {
    const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"sensitivity", num(d.sensitivity)},
            {"specificity", num(d.specificity)},
            {"accuracy", num(d.accuracy)},
            {"lr_pos", num(d.lr_pos)},
            {"lr_neg", num(d.lr_neg)}};
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace probitfuse
