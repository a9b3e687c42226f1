#ifndef SAMPLAN_TABLES_HPP
#define SAMPLAN_TABLES_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "samplan/designer.hpp"

namespace samplan {

enum class RowMatch { exact, oc_mismatch, params_mismatch, feasibility_mismatch };

inline const char* to_string(RowMatch m) {
    switch (m) {
    case RowMatch::exact: return "exact";
    case RowMatch::oc_mismatch: return "oc_mismatch";
    case RowMatch::params_mismatch: return "params_mismatch";
    case RowMatch::feasibility_mismatch: return "feasibility_mismatch";
    }
    return "?";
}

struct ReferencePlanRow {
    double p0 = 0, p1 = 0;
    long g = 0, c = 0, i = 0;
    double oc_aql = 0, oc_lql = 0;
    std::string note;
};

struct ReferenceComparisonRow {
    double p0 = 0, p1 = 0;
    std::optional<long> mchgsp_n, gasip_n, sasip_n;
    std::string note;
};

struct ReferenceTables {
    long r = 5;
    double alpha = 0.05, beta = 0.10;
    std::vector<ReferencePlanRow> table1;
    std::vector<ReferenceComparisonRow> table2;
};

inline ReferenceTables load_reference_tables(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference tables: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);

    ReferenceTables t;
    t.r = j.at("r").get<long>();
    t.alpha = j.at("alpha").get<double>();
    t.beta = j.at("beta").get<double>();
    for (const auto& row : j.at("table1")) {
        ReferencePlanRow r1;
        r1.p0 = row.at("p0").get<double>();
        r1.p1 = row.at("p1").get<double>();
        r1.g = row.at("g").get<long>();
        r1.c = row.at("c").get<long>();
        r1.i = row.at("i").get<long>();
        r1.oc_aql = row.at("oc_aql").get<double>();
        r1.oc_lql = row.at("oc_lql").get<double>();
        r1.note = row.value("note", "");
        t.table1.push_back(r1);
    }
    for (const auto& row : j.at("table2")) {
        ReferenceComparisonRow r2;
        r2.p0 = row.at("p0").get<double>();
        r2.p1 = row.at("p1").get<double>();
        auto opt = [&](const char* key) -> std::optional<long> {
            if (row.at(key).is_null()) return std::nullopt;
            return row.at(key).get<long>();
        };
        r2.mchgsp_n = opt("mchgsp_n");
        r2.gasip_n = opt("gasip_n");
        r2.sasip_n = opt("sasip_n");
        r2.note = row.value("note", "");
        t.table2.push_back(r2);
    }
    return t;
}

struct Table1Row {
    ReferencePlanRow reference;
    std::optional<PlanDesign> computed; ///< fresh two-point design, nullopt if infeasible
    double oc_aql_recomputed = 0;       ///< OC at the *reference* (g,c,i)
    double oc_lql_recomputed = 0;
    double oc_aql_delta = 0;
    double oc_lql_delta = 0;
    RowMatch match = RowMatch::exact;
};

struct MatchCounts {
    long exact = 0, oc_mismatch = 0, params_mismatch = 0, feasibility_mismatch = 0;

    void add(RowMatch m) {
        switch (m) {
        case RowMatch::exact: ++exact; break;
        case RowMatch::oc_mismatch: ++oc_mismatch; break;
        case RowMatch::params_mismatch: ++params_mismatch; break;
        case RowMatch::feasibility_mismatch: ++feasibility_mismatch; break;
        }
    }
    long total() const {
        return exact + oc_mismatch + params_mismatch + feasibility_mismatch;
    }
};

struct Table1Report {
    std::vector<Table1Row> rows;
    double tolerance = 1e-3;
    MatchCounts counts;
};

struct Table2Cell {
    std::optional<long> reference_n;
    std::optional<long> computed_n;

    bool agrees() const {
        if (reference_n.has_value() != computed_n.has_value()) return false;
        return !reference_n || *reference_n == *computed_n;
    }
};

struct Table2Row {
    double p0 = 0, p1 = 0;
    Table2Cell mchgsp, gasip, sasip;
    RowMatch match = RowMatch::exact;
    std::string note;
};

struct Table2Report {
    std::vector<Table2Row> rows;
    MatchCounts counts;
};

inline DesignRequest table_request(const ReferenceTables& t, double p0, double p1) {
    DesignRequest req;
    req.r = t.r;
    req.p0 = p0;
    req.p1 = p1;
    req.alpha = t.alpha;
    req.beta = t.beta;
    return req;
}

/// Re-derives every table-1 row: runs the chained design search and also
/// recomputes the OC pair at the reference parameters, then classifies the
/// row against the reference values.
inline Table1Report reproduce_table1(const ReferenceTables& tables, double tolerance) {
    if (!(tolerance > 0.0)) throw std::domain_error("tolerance must be > 0");
    Table1Report report;
    report.tolerance = tolerance;
    for (const auto& ref : tables.table1) {
        Table1Row row;
        row.reference = ref;

        PlanParams ref_plan{tables.r, ref.g, ref.c, ref.i};
        row.oc_aql_recomputed = oc_mchgsp(ref_plan, ref.p0);
        row.oc_lql_recomputed = oc_mchgsp(ref_plan, ref.p1);
        row.oc_aql_delta = row.oc_aql_recomputed - ref.oc_aql;
        row.oc_lql_delta = row.oc_lql_recomputed - ref.oc_lql;

        row.computed = try_design(table_request(tables, ref.p0, ref.p1),
                                  PlanKind::mchgsp);

        const bool oc_ok = std::abs(row.oc_aql_delta) <= tolerance &&
                           std::abs(row.oc_lql_delta) <= tolerance;
        if (!row.computed) {
            row.match = RowMatch::feasibility_mismatch;
        } else if (row.computed->params.g == ref.g && row.computed->params.c == ref.c &&
                   row.computed->params.i == ref.i) {
            row.match = oc_ok ? RowMatch::exact : RowMatch::oc_mismatch;
        } else {
            row.match = RowMatch::params_mismatch;
        }
        report.counts.add(row.match);
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Re-derives the three-plan sample-size comparison; an absent reference n is
/// matched against an infeasible-within-bounds search result.
inline Table2Report reproduce_table2(const ReferenceTables& tables) {
    Table2Report report;
    for (const auto& ref : tables.table2) {
        Table2Row row;
        row.p0 = ref.p0;
        row.p1 = ref.p1;
        row.note = ref.note;
        const DesignRequest req = table_request(tables, ref.p0, ref.p1);

        auto run = [&](PlanKind kind) -> std::optional<long> {
            if (auto d = try_design(req, kind)) return d->n;
            return std::nullopt;
        };
        row.mchgsp = {ref.mchgsp_n, run(PlanKind::mchgsp)};
        row.gasip = {ref.gasip_n, run(PlanKind::gasip)};
        row.sasip = {ref.sasip_n, run(PlanKind::sasip)};

        const Table2Cell* cells[] = {&row.mchgsp, &row.gasip, &row.sasip};
        bool feas_diff = false, value_diff = false;
        for (const auto* cell : cells) {
            if (cell->reference_n.has_value() != cell->computed_n.has_value())
                feas_diff = true;
            else if (!cell->agrees())
                value_diff = true;
        }
        row.match = feas_diff ? RowMatch::feasibility_mismatch
                    : value_diff ? RowMatch::params_mismatch
                                 : RowMatch::exact;
        report.counts.add(row.match);
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---- serialization ----

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

inline std::string opt_num(const std::optional<long>& v) {
    return v ? std::to_string(*v) : std::string{};
}

} // namespace detail

inline std::string to_csv(const Table1Report& report) {
    std::ostringstream os;
    os << "p0,p1,published_g,published_c,published_i,computed_g,computed_c,"
          "computed_i,oc_aql_published,oc_aql_computed,oc_lql_published,"
          "oc_lql_computed,match\n";
    for (const auto& row : report.rows) {
        const auto& ref = row.reference;
        os << detail::num(ref.p0) << ',' << detail::num(ref.p1) << ',' << ref.g << ','
           << ref.c << ',' << ref.i << ',';
        if (row.computed)
            os << row.computed->params.g << ',' << row.computed->params.c << ','
               << row.computed->params.i << ',';
        else
            os << ",,,";
        os << detail::num(ref.oc_aql) << ',' << detail::num(row.oc_aql_recomputed) << ','
           << detail::num(ref.oc_lql) << ',' << detail::num(row.oc_lql_recomputed) << ','
           << to_string(row.match) << '\n';
    }
    return os.str();
}

inline std::string to_csv(const Table2Report& report) {
    std::ostringstream os;
    os << "p0,p1,mchgsp_published_n,mchgsp_computed_n,gasip_published_n,"
          "gasip_computed_n,sasip_published_n,sasip_computed_n,match\n";
    for (const auto& row : report.rows) {
        os << detail::num(row.p0) << ',' << detail::num(row.p1) << ','
           << detail::opt_num(row.mchgsp.reference_n) << ','
           << detail::opt_num(row.mchgsp.computed_n) << ','
           << detail::opt_num(row.gasip.reference_n) << ','
           << detail::opt_num(row.gasip.computed_n) << ','
           << detail::opt_num(row.sasip.reference_n) << ','
           << detail::opt_num(row.sasip.computed_n) << ','
           << to_string(row.match) << '\n';
    }
    return os.str();
}

inline nlohmann::json to_json(const PlanDesign& d) {
    return {
        {"kind", to_string(d.kind)},
        {"r", d.params.r},
        {"g", d.params.g},
        {"c", d.params.c},
        {"i", d.params.i},
        {"n", d.n},
        {"oc_at_aql", d.oc_at_aql},
        {"oc_at_lql", d.oc_at_lql},
    };
}

inline nlohmann::json to_json(const MatchCounts& counts) {
    return {
        {"exact", counts.exact},
        {"oc_mismatch", counts.oc_mismatch},
        {"params_mismatch", counts.params_mismatch},
        {"feasibility_mismatch", counts.feasibility_mismatch},
    };
}

inline nlohmann::json to_json(const Table1Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        const auto& ref = row.reference;
        nlohmann::json jr = {
            {"p0", ref.p0},
            {"p1", ref.p1},
            {"published", {{"g", ref.g}, {"c", ref.c}, {"i", ref.i},
                           {"oc_aql", ref.oc_aql}, {"oc_lql", ref.oc_lql}}},
            {"computed", row.computed ? to_json(*row.computed)
                                      : nlohmann::json(nullptr)},
            {"oc_aql_recomputed", row.oc_aql_recomputed},
            {"oc_lql_recomputed", row.oc_lql_recomputed},
            {"oc_aql_delta", row.oc_aql_delta},
            {"oc_lql_delta", row.oc_lql_delta},
            {"match", to_string(row.match)},
        };
        if (!ref.note.empty()) jr["note"] = ref.note;
        rows.push_back(jr);
    }
    return {{"table", 1},
            {"tolerance", report.tolerance},
            {"summary", to_json(report.counts)},
            {"rows", rows}};
}

inline nlohmann::json to_json(const Table2Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    auto cell = [](const Table2Cell& c) {
        nlohmann::json j;
        j["published_n"] = c.reference_n ? nlohmann::json(*c.reference_n)
                                         : nlohmann::json(nullptr);
        j["computed_n"] = c.computed_n ? nlohmann::json(*c.computed_n)
                                       : nlohmann::json(nullptr);
        return j;
    };
    for (const auto& row : report.rows) {
        nlohmann::json jr = {
            {"p0", row.p0},
            {"p1", row.p1},
            {"mchgsp", cell(row.mchgsp)},
            {"gasip", cell(row.gasip)},
            {"sasip", cell(row.sasip)},
            {"match", to_string(row.match)},
        };
        if (!row.note.empty()) jr["note"] = row.note;
        rows.push_back(jr);
    }
    return {{"table", 2}, {"summary", to_json(report.counts)}, {"rows", rows}};
}

} // namespace samplan

#endif // SAMPLAN_TABLES_HPP
