#ifndef SAMPLAN_OC_HPP
#define SAMPLAN_OC_HPP

#include <stdexcept>

#include "samplan/binomial.hpp"

namespace samplan {

/// One lot-inspection plan: n = r*g items per lot, split into g groups of r,
/// accept on d <= c conforming samples subject to the chain rule over the
/// preceding i lots.
struct PlanParams {
    long r = 1; ///< items per group
    long g = 1; ///< number of groups
    long c = 0; ///< acceptance number (total nonconforming allowed per lot)
    long i = 1; ///< chain length (preceding lots consulted)

    long sample_size() const { return r * g; }

    void validate() const {
        if (r < 1) throw std::domain_error("plan: r must be >= 1");
        if (g < 1) throw std::domain_error("plan: g must be >= 1");
        if (i < 1) throw std::domain_error("plan: i must be >= 1");
        if (c < 0 || c > r * g)
            throw std::domain_error("plan: c must be in [0, r*g]");
    }
};

/// OC of a single-stage attribute plan: accept iff d <= c in one sample of n.
/// With n = r*g this is the group-plan OC; with r = 1 the classic single plan.
inline double oc_single(long n, long c, double p) {
    return binom_cdf(n, c, p);
}

/// Chain composition: current sample conforms (probability P) and at most one
/// of the preceding i samples was nonconforming.
///
///   P * (P^i + i * P^(i-1) * (1 - P))
///
/// For i = 1 the bracket is identically one, so the unchained P is returned
/// as-is; this keeps the i = 1 path bit-identical to oc_single.
inline double oc_mchsp(double conforming_prob, long i) {
    if (i < 1) throw std::domain_error("oc_mchsp: i must be >= 1");
    check_probability(conforming_prob, "conforming probability");
    const double P = conforming_prob;
    if (i == 1) return P;
    const double bracket =
        std::pow(P, double(i)) + double(i) * std::pow(P, double(i - 1)) * (1.0 - P);
    return clamp01(P * clamp01(bracket));
}

/// OC of the chained group plan: the per-lot acceptance probability when a
/// stream of lots of identical quality p is inspected under the chain rule.
inline double oc_mchgsp(const PlanParams& plan, double p) {
    plan.validate();
    return oc_mchsp(oc_single(plan.sample_size(), plan.c, p), plan.i);
}

} // namespace samplan

#endif // SAMPLAN_OC_HPP
