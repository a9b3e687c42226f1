#ifndef SAMPLAN_DESIGNER_HPP
#define SAMPLAN_DESIGNER_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "samplan/oc.hpp"

namespace samplan {

enum class PlanKind { mchgsp, gasip, sasip };

inline const char* to_string(PlanKind k) {
    switch (k) {
    case PlanKind::mchgsp: return "mchgsp";
    case PlanKind::gasip: return "gasip";
    case PlanKind::sasip: return "sasip";
    }
    return "?";
}

struct SearchBounds {
    long g_max = 1000;
    long c_max = 10;
    long i_max = 10;

    void validate() const {
        if (g_max < 1) throw std::domain_error("bounds: g_max must be >= 1");
        if (c_max < 0) throw std::domain_error("bounds: c_max must be >= 0");
        if (i_max < 1) throw std::domain_error("bounds: i_max must be >= 1");
    }
};

/// Order in which ties among feasible (c, i) at the minimal g are broken.
enum class TieBreak { c_then_i, i_then_c };

/// Two-point design problem: high acceptance at the AQL, low acceptance at
/// the LQL, for a fixed group size r.
struct DesignRequest {
    long r = 1;
    double p0 = 0.0;  ///< AQL
    double p1 = 0.0;  ///< LQL
    double alpha = 0.05;
    double beta = 0.10;
    SearchBounds bounds{};
    TieBreak tie_break = TieBreak::c_then_i;

    void validate() const {
        if (r < 1) throw std::domain_error("request: r must be >= 1");
        if (!(p0 > 0.0 && p1 < 1.0 && p0 < p1))
            throw std::domain_error("request: need 0 < aql < lql < 1");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("request: alpha must be in (0,1)");
        if (!(beta > 0.0 && beta < 1.0))
            throw std::domain_error("request: beta must be in (0,1)");
        bounds.validate();
    }
};

struct PlanDesign {
    PlanParams params;
    long n = 0; ///< per-lot sample size g*r
    double oc_at_aql = 0.0;
    double oc_at_lql = 0.0;
    PlanKind kind = PlanKind::mchgsp;
};

class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(PlanKind kind, const SearchBounds& bounds)
        : std::runtime_error(std::string("no feasible ") + samplan::to_string(kind) +
                             " plan within bounds (g_max=" + std::to_string(bounds.g_max) +
                             ", c_max=" + std::to_string(bounds.c_max) +
                             ", i_max=" + std::to_string(bounds.i_max) + ")"),
          kind_(kind), bounds_(bounds) {}

    PlanKind kind() const { return kind_; }
    const SearchBounds& bounds() const { return bounds_; }

private:
    PlanKind kind_;
    SearchBounds bounds_;
};

/// OC under the given plan family; the chained formula applies only to the
/// chained kind, the others reduce to the single-stage OC of the pooled
/// sample.
inline double oc_for_kind(PlanKind kind, const PlanParams& plan, double p) {
    if (kind == PlanKind::mchgsp) return oc_mchgsp(plan, p);
    return oc_single(plan.sample_size(), plan.c, p);
}

/// Both two-point constraints: OC(p0) >= 1 - alpha and OC(p1) <= beta.
inline bool feasible(const PlanParams& plan, const DesignRequest& req, PlanKind kind) {
    plan.validate();
    req.validate();
    return oc_for_kind(kind, plan, req.p0) >= 1.0 - req.alpha &&
           oc_for_kind(kind, plan, req.p1) <= req.beta;
}

namespace detail {

inline PlanDesign make_design(PlanKind kind, const PlanParams& plan,
                              const DesignRequest& req) {
    PlanDesign d;
    d.params = plan;
    d.n = plan.sample_size();
    d.oc_at_aql = oc_for_kind(kind, plan, req.p0);
    d.oc_at_lql = oc_for_kind(kind, plan, req.p1);
    d.kind = kind;
    return d;
}

// Feasible (c, i) in tie-break order at fixed g, or nullopt.  The consumer
// constraint can only be met through c small enough or i large enough; the
// producer constraint needs binom_cdf(n, c, p0) >= 1 - alpha outright, since
// chaining never raises the OC.  The latter prunes the i loop.
inline std::optional<PlanParams> best_pair_at_g(long g, const DesignRequest& req,
                                                PlanKind kind) {
    const long r = kind == PlanKind::sasip ? 1 : req.r;
    const long n = r * g;
    const long c_hi = std::min(req.bounds.c_max, n);
    const long i_hi = kind == PlanKind::mchgsp ? req.bounds.i_max : 1;

    auto candidate = [&](long c, long i) -> std::optional<PlanParams> {
        PlanParams plan{r, g, c, i};
        if (oc_for_kind(kind, plan, req.p0) >= 1.0 - req.alpha &&
            oc_for_kind(kind, plan, req.p1) <= req.beta)
            return plan;
        return std::nullopt;
    };

    if (req.tie_break == TieBreak::c_then_i || kind != PlanKind::mchgsp) {
        for (long c = 0; c <= c_hi; ++c) {
            if (binom_cdf(n, c, req.p0) < 1.0 - req.alpha) continue;
            for (long i = 1; i <= i_hi; ++i)
                if (auto plan = candidate(c, i)) return plan;
        }
    } else {
        for (long i = 1; i <= i_hi; ++i)
            for (long c = 0; c <= c_hi; ++c) {
                if (binom_cdf(n, c, req.p0) < 1.0 - req.alpha) continue;
                if (auto plan = candidate(c, i)) return plan;
            }
    }
    return std::nullopt;
}

} // namespace detail

/// Minimizes n = g*r: returns the plan at the smallest feasible g, with ties
/// among (c, i) broken per the request's tie-break order.  Empty result means
/// nothing feasible within bounds.
inline std::optional<PlanDesign> try_design(const DesignRequest& req, PlanKind kind) {
    req.validate();
    for (long g = 1; g <= req.bounds.g_max; ++g)
        if (auto plan = detail::best_pair_at_g(g, req, kind))
            return detail::make_design(kind, *plan, req);
    return std::nullopt;
}

inline PlanDesign design_of_kind(const DesignRequest& req, PlanKind kind) {
    if (auto d = try_design(req, kind)) return *d;
    throw InfeasibleError(kind, req.bounds);
}

/// Chained group plan (g, c, i) minimizing n = g*r.
inline PlanDesign design_mchgsp(const DesignRequest& req) {
    return design_of_kind(req, PlanKind::mchgsp);
}

/// Unchained group plan (g, c) minimizing n = g*r.
inline PlanDesign design_gasip(const DesignRequest& req) {
    return design_of_kind(req, PlanKind::gasip);
}

/// Single plan: r is treated as 1, so g is the sample size itself.
inline PlanDesign design_sasip(const DesignRequest& req) {
    return design_of_kind(req, PlanKind::sasip);
}

} // namespace samplan

#endif // SAMPLAN_DESIGNER_HPP
