#ifndef SAMPLAN_BINOMIAL_HPP
#define SAMPLAN_BINOMIAL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace samplan {

// Results may stray a hair outside [0,1] from roundoff; anything worse is a
// genuine bug in the caller's arithmetic, not noise.
inline constexpr double kProbClampSlack = 1e-12;

inline double clamp01(double x) {
    if (x >= 0.0 && x <= 1.0) return x;
    if (x < 0.0 && x >= -kProbClampSlack) return 0.0;
    if (x > 1.0 && x <= 1.0 + kProbClampSlack) return 1.0;
    throw std::logic_error("probability excursion beyond clamp slack: " +
                           std::to_string(x));
}

inline void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

namespace detail {

// ln C(n,k) via lgamma.
inline double log_choose(long n, long k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

} // namespace detail

/// P(X = k) for X ~ Binomial(n, p).
///
/// Evaluated from a log-space term (lgamma + log1p), never from a raw
/// binomial coefficient, so it stays finite and accurate for n in the
/// thousands.
inline double binom_pmf(long n, long k, double p) {
    if (n < 1) throw std::domain_error("binom_pmf: n must be >= 1");
    if (k < 0 || k > n) throw std::domain_error("binom_pmf: k must be in [0, n]");
    check_probability(p, "p");
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double log_term = detail::log_choose(n, k) +
                            double(k) * std::log(p) +
                            double(n - k) * std::log1p(-p);
    return clamp01(std::exp(log_term));
}

/// P(X <= c) for X ~ Binomial(n, p).
///
/// Sums whichever tail is smaller, anchored at that tail's largest term with
/// the multiplicative pmf recurrence walking toward the tail.  Anchoring in
/// log space keeps the sum alive where (1-p)^n underflows (e.g. n = 1000,
/// p = 0.999); summing the smaller tail keeps results near 1 monotone in p
/// instead of jittering by an ulp around it.
inline double binom_cdf(long n, long c, double p) {
    if (n < 1) throw std::domain_error("binom_cdf: n must be >= 1");
    if (c < 0 || c > n) throw std::domain_error("binom_cdf: c must be in [0, n]");
    check_probability(p, "p");
    if (p == 0.0) return 1.0;
    if (p == 1.0) return c >= n ? 1.0 : 0.0;
    if (c == n) return 1.0;

    // pmf rises up to k = floor((n+1)p), falls after
    const long mode = static_cast<long>(std::floor(double(n + 1) * p));
    const double ratio = p / (1.0 - p);

    if (c < mode) { // lower tail [0, c], largest term at c, walk down
        double term = binom_pmf(n, c, p);
        double sum = term;
        for (long k = c; k > 0; --k) {
            term *= double(k) / (double(n - k + 1) * ratio);
            sum += term;
            if (term == 0.0) break;
        }
        return clamp01(sum);
    }

    // upper tail [c+1, n], largest term at c+1, walk up
    double term = binom_pmf(n, c + 1, p);
    double sum = term;
    for (long k = c + 1; k < n; ++k) {
        term *= double(n - k) * ratio / double(k + 1);
        sum += term;
        if (term == 0.0) break;
    }
    return clamp01(1.0 - sum);
}

} // namespace samplan

#endif // SAMPLAN_BINOMIAL_HPP
