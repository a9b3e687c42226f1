// samplan: designs and analyzes time-truncated attribute sampling plans
// (single, group, and chained group), with machine-readable output.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible design,
//             3 reproduction mismatch.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "samplan/output.hpp"
#include "samplan/samplan.hpp"

#ifndef SAMPLAN_DATA_FILE
#define SAMPLAN_DATA_FILE "data/reference_tables.json"
#endif

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMismatch = 3;

samplan::OutputFormat resolve_format(const std::string& flag) {
    if (!flag.empty()) return samplan::parse_format(flag);
    return samplan::default_format();
}

void emit(const samplan::OutputRecord& record, samplan::OutputFormat format,
          const std::string& csv, const std::string& text) {
    switch (format) {
    case samplan::OutputFormat::json:
        std::cout << record.to_json().dump(2) << '\n';
        break;
    case samplan::OutputFormat::csv:
        std::cout << csv;
        break;
    case samplan::OutputFormat::text:
        std::cout << text;
        break;
    }
}

// ---- design ----

struct DesignArgs {
    std::string kind = "mchgsp";
    long r = 1;
    double aql = 0, lql = 0, alpha = 0.05, beta = 0.10;
    long g_max = 1000, c_max = 10, i_max = 10;
    std::string tie_break = "ci";
    std::string format;
};

int run_design(const DesignArgs& a) {
    if (a.lql <= a.aql) {
        std::cerr << "error: lql must exceed aql\n";
        return kExitUsage;
    }
    samplan::PlanKind kind;
    if (a.kind == "mchgsp") kind = samplan::PlanKind::mchgsp;
    else if (a.kind == "gasip") kind = samplan::PlanKind::gasip;
    else if (a.kind == "sasip") kind = samplan::PlanKind::sasip;
    else {
        std::cerr << "error: --kind must be mchgsp, gasip or sasip\n";
        return kExitUsage;
    }

    samplan::DesignRequest req;
    req.r = kind == samplan::PlanKind::sasip ? 1 : a.r;
    req.p0 = a.aql;
    req.p1 = a.lql;
    req.alpha = a.alpha;
    req.beta = a.beta;
    req.bounds = {a.g_max, a.c_max, a.i_max};
    req.tie_break = a.tie_break == "ic" ? samplan::TieBreak::i_then_c
                                        : samplan::TieBreak::c_then_i;

    const auto format = resolve_format(a.format);
    samplan::OutputRecord record;
    record.command = "design";
    record.inputs = {{"kind", a.kind},     {"r", req.r},         {"aql", a.aql},
                     {"lql", a.lql},       {"alpha", a.alpha},   {"beta", a.beta},
                     {"g_max", a.g_max},   {"c_max", a.c_max},   {"i_max", a.i_max},
                     {"tie_break", a.tie_break}};

    const auto design = samplan::try_design(req, kind);
    if (!design) {
        record.result = {{"infeasible", true},
                         {"bounds", {{"g_max", a.g_max},
                                     {"c_max", a.c_max},
                                     {"i_max", a.i_max}}}};
        record.warnings.push_back("no feasible plan within bounds");
        std::ostringstream csv, text;
        csv << "kind,r,g,c,i,n,oc_at_aql,oc_at_lql,status\n"
            << a.kind << ',' << req.r << ",,,,,,,infeasible\n";
        text << "infeasible within bounds (g_max=" << a.g_max
             << ", c_max=" << a.c_max << ", i_max=" << a.i_max << ")\n";
        emit(record, format, csv.str(), text.str());
        return kExitInfeasible;
    }

    record.result = samplan::to_json(*design);
    std::ostringstream csv, text;
    csv.precision(10);
    csv << "kind,r,g,c,i,n,oc_at_aql,oc_at_lql,status\n"
        << a.kind << ',' << design->params.r << ',' << design->params.g << ','
        << design->params.c << ',' << design->params.i << ',' << design->n << ','
        << design->oc_at_aql << ',' << design->oc_at_lql << ",ok\n";
    text.precision(7);
    text << "plan: g=" << design->params.g << " c=" << design->params.c;
    if (kind == samplan::PlanKind::mchgsp) text << " i=" << design->params.i;
    text << "  n=" << design->n << "\noc(aql)=" << design->oc_at_aql
         << "  oc(lql)=" << design->oc_at_lql << '\n';
    emit(record, format, csv.str(), text.str());
    return kExitOk;
}

// ---- oc ----

struct OcArgs {
    long r = 0, g = 0, c = 0, i = 0;
    std::optional<double> p;
    std::optional<double> p_start, p_stop, p_step;
    std::string dist;
    std::optional<double> time;
    std::string format;
};

int run_oc(const OcArgs& a) {
    samplan::PlanParams plan{a.r, a.g, a.c, a.i};
    plan.validate();

    std::vector<double> grid;
    if (a.p) {
        grid.push_back(*a.p);
    } else if (a.p_start || a.p_stop || a.p_step) {
        if (!(a.p_start && a.p_stop && a.p_step))
            throw std::domain_error("grid needs --p-start, --p-stop and --p-step");
        const double start = *a.p_start, stop = *a.p_stop, step = *a.p_step;
        if (!(step > 0.0)) throw std::domain_error("--p-step must be > 0");
        if (start > stop) throw std::domain_error("--p-start must be <= --p-stop");
        if (start < 0.0 || stop > 1.0)
            throw std::domain_error("p grid must lie within [0,1]");
        const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long k = 0; k < count; ++k)
            grid.push_back(std::min(start + double(k) * step, 1.0));
    } else if (!a.dist.empty() || a.time) {
        if (a.dist.empty() || !a.time)
            throw std::domain_error("--dist and --time must be given together");
        grid.push_back(samplan::fraction_nonconforming(samplan::parse_dist(a.dist),
                                                       *a.time));
    } else {
        throw std::domain_error("give --p, a --p-start/--p-stop/--p-step grid, "
                                "or --dist with --time");
    }

    const auto format = resolve_format(a.format);
    samplan::OutputRecord record;
    record.command = "oc";
    record.inputs = {{"r", a.r}, {"g", a.g}, {"c", a.c}, {"i", a.i}};
    if (!a.dist.empty()) record.inputs["dist"] = a.dist;
    if (a.time) record.inputs["time"] = *a.time;

    json rows = json::array();
    std::ostringstream csv, text;
    csv.precision(10);
    text.precision(7);
    csv << "p,oc_mchgsp,oc_gasip\n";
    text << "p\toc_mchgsp\toc_gasip\n";
    for (double p : grid) {
        const double chained = samplan::oc_mchgsp(plan, p);
        const double single = samplan::oc_single(plan.sample_size(), plan.c, p);
        rows.push_back({{"p", p}, {"oc_mchgsp", chained}, {"oc_gasip", single}});
        csv << p << ',' << chained << ',' << single << '\n';
        text << p << '\t' << chained << '\t' << single << '\n';
    }
    record.result = {{"rows", rows}};
    emit(record, format, csv.str(), text.str());
    return kExitOk;
}

// ---- simulate ----

struct SimulateArgs {
    long r = 0, g = 0, c = 0, i = 0;
    double p = 0;
    long lots = 0;
    std::uint64_t seed = 0;
    std::optional<long> burn_in;
    std::string format;
};

int run_simulate(const SimulateArgs& a) {
    samplan::SimConfig cfg;
    cfg.plan = {a.r, a.g, a.c, a.i};
    cfg.p = a.p;
    cfg.lots = a.lots;
    cfg.seed = a.seed;
    cfg.burn_in = a.burn_in;

    const auto cmp = samplan::compare_to_analytic(cfg);

    const auto format = resolve_format(a.format);
    samplan::OutputRecord record;
    record.command = "simulate";
    record.inputs = {{"r", a.r},       {"g", a.g},   {"c", a.c},
                     {"i", a.i},       {"p", a.p},   {"lots", a.lots},
                     {"seed", a.seed}, {"burn_in", cfg.effective_burn_in()}};
    record.result = samplan::to_json(cmp);
    if (cmp.flagged)
        record.warnings.push_back(
            "empirical rate deviates more than 4 standard errors from the "
            "analytic OC");

    std::ostringstream csv, text;
    csv.precision(10);
    text.precision(7);
    csv << "lots_counted,accepted,rate,std_err,analytic,z,flagged,seed\n"
        << cmp.sim.lots_counted << ',' << cmp.sim.accepted << ',' << cmp.sim.rate
        << ',' << cmp.sim.std_err << ',' << cmp.analytic << ',' << cmp.z << ','
        << (cmp.flagged ? "true" : "false") << ',' << cmp.sim.seed << '\n';
    text << "lots counted: " << cmp.sim.lots_counted
         << "\naccepted:     " << cmp.sim.accepted
         << "\nrate:         " << cmp.sim.rate << " +/- " << cmp.sim.std_err
         << "\nanalytic OC:  " << cmp.analytic << "\nz:            " << cmp.z
         << (cmp.flagged ? "  (FLAGGED: |z| > 4)" : "") << '\n';
    emit(record, format, csv.str(), text.str());
    return kExitOk;
}

// ---- reproduce ----

struct ReproduceArgs {
    int table = 0;
    double tolerance = 1e-3;
    std::string data_file = SAMPLAN_DATA_FILE;
    std::string output;
    std::string format;
};

int run_reproduce(const ReproduceArgs& a) {
    if (a.table != 1 && a.table != 2) {
        std::cerr << "error: table must be 1 or 2\n";
        return kExitUsage;
    }
    const auto tables = samplan::load_reference_tables(a.data_file);

    json report_json;
    std::string report_csv;
    samplan::MatchCounts counts;
    if (a.table == 1) {
        const auto report = samplan::reproduce_table1(tables, a.tolerance);
        report_json = samplan::to_json(report);
        report_csv = samplan::to_csv(report);
        counts = report.counts;
    } else {
        const auto report = samplan::reproduce_table2(tables);
        report_json = samplan::to_json(report);
        report_csv = samplan::to_csv(report);
        counts = report.counts;
    }

    const auto format = resolve_format(a.format);
    const bool all_exact = counts.exact == counts.total();

    std::ostringstream summary;
    summary << "table " << a.table << ": " << counts.total() << " rows, exact="
            << counts.exact << " oc_mismatch=" << counts.oc_mismatch
            << " params_mismatch=" << counts.params_mismatch
            << " feasibility_mismatch=" << counts.feasibility_mismatch << '\n';

    samplan::OutputRecord record;
    record.command = "reproduce";
    record.inputs = {{"table", a.table},
                     {"tolerance", a.tolerance},
                     {"data_file", a.data_file}};
    record.result = report_json;
    if (!all_exact)
        record.warnings.push_back("computed values differ from the reference "
                                  "tables on some rows");

    if (!a.output.empty()) {
        std::ofstream out(a.output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write to " << a.output << '\n';
            return kExitUsage;
        }
        switch (format) {
        case samplan::OutputFormat::json: out << report_json.dump(2) << '\n'; break;
        case samplan::OutputFormat::csv: out << report_csv; break;
        case samplan::OutputFormat::text: out << summary.str(); break;
        }
        if (!out.good()) {
            std::cerr << "error: failed writing " << a.output << '\n';
            return kExitUsage;
        }
        std::cout << summary.str();
    } else {
        emit(record, format, report_csv, summary.str());
    }
    return all_exact ? kExitOk : kExitMismatch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-truncated attribute sampling plans: design, OC curves, "
                 "chained-rule simulation, reference-table reproduction"};
    app.require_subcommand(1);

    DesignArgs da;
    auto* design = app.add_subcommand("design", "solve the two-point design problem");
    design->add_option("--kind", da.kind, "mchgsp|gasip|sasip")
        ->default_str("mchgsp");
    design->add_option("--r", da.r, "items per group");
    design->add_option("--aql", da.aql, "acceptable quality level p0")->required();
    design->add_option("--lql", da.lql, "limiting quality level p1")->required();
    design->add_option("--alpha", da.alpha, "producer's risk");
    design->add_option("--beta", da.beta, "consumer's risk");
    design->add_option("--g-max", da.g_max, "largest group count searched");
    design->add_option("--c-max", da.c_max, "largest acceptance number searched");
    design->add_option("--i-max", da.i_max, "largest chain length searched");
    design->add_option("--tie-break", da.tie_break, "ci (c then i) or ic");
    design->add_option("--format", da.format, "json|csv|text");

    OcArgs oa;
    auto* oc = app.add_subcommand("oc", "evaluate OC values on a point or grid");
    oc->add_option("--r", oa.r, "items per group")->required();
    oc->add_option("--g", oa.g, "number of groups")->required();
    oc->add_option("--c", oa.c, "acceptance number")->required();
    oc->add_option("--i", oa.i, "chain length")->required();
    double p_single = 0, p_start = 0, p_stop = 0, p_step = 0, time_val = 0;
    auto* p_opt = oc->add_option("--p", p_single, "single fraction nonconforming");
    auto* ps_opt = oc->add_option("--p-start", p_start, "grid start");
    auto* pe_opt = oc->add_option("--p-stop", p_stop, "grid stop");
    auto* pd_opt = oc->add_option("--p-step", p_step, "grid step");
    oc->add_option("--dist", oa.dist,
                   "lifetime distribution, e.g. exponential:scale=10");
    auto* t_opt = oc->add_option("--time", time_val, "truncation time");
    oc->add_option("--format", oa.format, "json|csv|text");

    SimulateArgs sa;
    auto* simulate =
        app.add_subcommand("simulate", "Monte Carlo run of the chained rule");
    simulate->add_option("--r", sa.r, "items per group")->required();
    simulate->add_option("--g", sa.g, "number of groups")->required();
    simulate->add_option("--c", sa.c, "acceptance number")->required();
    simulate->add_option("--i", sa.i, "chain length")->required();
    simulate->add_option("--p", sa.p, "true lot quality")->required();
    simulate->add_option("--lots", sa.lots, "stream length")->required();
    simulate->add_option("--seed", sa.seed, "RNG seed")->required();
    long burn_in_val = 0;
    auto* bi_opt = simulate->add_option("--burn-in", burn_in_val,
                                        "lots excluded from the estimate");
    simulate->add_option("--format", sa.format, "json|csv|text");

    ReproduceArgs ra;
    auto* reproduce =
        app.add_subcommand("reproduce", "regenerate the reference tables");
    reproduce->add_option("--table", ra.table, "1 or 2")->required();
    reproduce->add_option("--tolerance", ra.tolerance, "OC comparison tolerance");
    reproduce->add_option("--data", ra.data_file, "reference tables JSON file");
    reproduce->add_option("--output", ra.output, "write the report here");
    reproduce->add_option("--format", ra.format, "json|csv|text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*design) return run_design(da);
        if (*oc) {
            if (*p_opt) oa.p = p_single;
            if (*ps_opt) oa.p_start = p_start;
            if (*pe_opt) oa.p_stop = p_stop;
            if (*pd_opt) oa.p_step = p_step;
            if (*t_opt) oa.time = time_val;
            return run_oc(oa);
        }
        if (*simulate) {
            if (*bi_opt) sa.burn_in = burn_in_val;
            return run_simulate(sa);
        }
        if (*reproduce) return run_reproduce(ra);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
