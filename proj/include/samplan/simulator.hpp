#ifndef SAMPLAN_SIMULATOR_HPP
#define SAMPLAN_SIMULATOR_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "samplan/oc.hpp"

namespace samplan {

/// A seeded stream of lots of constant quality p inspected under the chain
/// rule.  Lots inside the burn-in window are inspected (their conformance
/// feeds later chain windows) but excluded from the acceptance statistics.
struct SimConfig {
    PlanParams plan{};
    double p = 0.0;
    long lots = 0;
    std::uint64_t seed = 0;
    std::optional<long> burn_in; ///< defaults to plan.i when unset

    long effective_burn_in() const { return burn_in.value_or(plan.i); }

    void validate() const {
        plan.validate();
        check_probability(p, "p");
        const long b = effective_burn_in();
        if (b < plan.i) throw std::domain_error("sim: burn_in must be >= plan.i");
        if (lots <= b) throw std::domain_error("sim: lots must exceed burn_in");
    }
};

struct SimResult {
    long lots_counted = 0;
    long accepted = 0;
    double rate = 0.0;
    double std_err = 0.0;
    std::uint64_t seed = 0;
};

/// Runs the lot stream: d_t ~ Binomial(r*g, p) per lot, conformance d_t <= c,
/// acceptance additionally requires at most one nonconforming result among
/// the preceding i lots.  The chain consults conformance of earlier samples,
/// not their accept/reject outcomes.
inline SimResult simulate_chain(const SimConfig& cfg) {
    cfg.validate();
    const long n = cfg.plan.sample_size();
    const long c = cfg.plan.c;
    const long i = cfg.plan.i;
    const long burn_in = cfg.effective_burn_in();

    std::mt19937_64 rng(cfg.seed);
    std::binomial_distribution<long> draw(n, cfg.p);
    const bool degenerate = cfg.p == 0.0 || cfg.p == 1.0;
    const long fixed_d = cfg.p == 0.0 ? 0 : n;

    std::deque<bool> window; // conformance of the last i lots
    long nonconforming_in_window = 0;
    long counted = 0, accepted = 0;

    for (long t = 1; t <= cfg.lots; ++t) {
        const long d = degenerate ? fixed_d : draw(rng);
        const bool conforming = d <= c;
        if (t > burn_in) {
            ++counted;
            if (conforming && nonconforming_in_window <= 1) ++accepted;
        }
        window.push_back(conforming);
        if (!conforming) ++nonconforming_in_window;
        if (long(window.size()) > i) {
            if (!window.front()) --nonconforming_in_window;
            window.pop_front();
        }
    }

    SimResult result;
    result.lots_counted = counted;
    result.accepted = accepted;
    result.rate = double(accepted) / double(counted);
    result.std_err = std::sqrt(result.rate * (1.0 - result.rate) / double(counted));
    result.seed = cfg.seed;
    return result;
}

struct AnalyticComparison {
    double analytic = 0.0;
    double empirical = 0.0;
    double std_err = 0.0;
    double z = 0.0;
    bool flagged = false;            ///< |z| > 4
    bool exact_disagreement = false; ///< std_err == 0 yet rate != analytic
    SimResult sim{};
};

/// z-score of the empirical acceptance rate against the chained OC.
inline AnalyticComparison compare_to_analytic(const SimConfig& cfg) {
    AnalyticComparison cmp;
    cmp.sim = simulate_chain(cfg);
    cmp.analytic = oc_mchgsp(cfg.plan, cfg.p);
    cmp.empirical = cmp.sim.rate;
    cmp.std_err = cmp.sim.std_err;
    if (cmp.std_err == 0.0) {
        if (cmp.empirical == cmp.analytic) {
            cmp.z = 0.0;
        } else {
            cmp.exact_disagreement = true;
            cmp.flagged = true;
            cmp.z = std::numeric_limits<double>::infinity();
        }
    } else {
        cmp.z = (cmp.empirical - cmp.analytic) / cmp.std_err;
        cmp.flagged = std::abs(cmp.z) > 4.0;
    }
    return cmp;
}

} // namespace samplan

#endif // SAMPLAN_SIMULATOR_HPP
