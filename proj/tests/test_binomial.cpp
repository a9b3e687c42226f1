#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "samplan/binomial.hpp"

using samplan::binom_cdf;
using samplan::binom_pmf;
using samplan::clamp01;

namespace {

// Exhaustive oracle: every outcome vector of n Bernoulli trials, weighted by
// its per-bit product probability, bucketed by the number of failures.
std::vector<double> enumeration_cdf(int n, double p) {
    std::vector<double> by_count(n + 1, 0.0);
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        double prob = 1.0;
        int failures = 0;
        for (int bit = 0; bit < n; ++bit) {
            if (mask & (1UL << bit)) {
                prob *= p;
                ++failures;
            } else {
                prob *= 1.0 - p;
            }
        }
        by_count[failures] += prob;
    }
    std::vector<double> cdf(n + 1);
    double run = 0.0;
    for (int k = 0; k <= n; ++k) {
        run += by_count[k];
        cdf[k] = run;
    }
    return cdf;
}

} // namespace

TEST_CASE("binom_pmf basic values", "[binomial]") {
    CHECK(binom_pmf(1, 0, 0.3) == Catch::Approx(0.7).margin(1e-15));
    CHECK(binom_pmf(5, 5, 1.0) == 1.0);
    CHECK(binom_pmf(5, 0, 1.0) == 0.0);
    CHECK(binom_pmf(5, 0, 0.0) == 1.0);

    // exp(65 * ln 0.95), cross-checked against an arbitrary-precision oracle
    CHECK(binom_pmf(65, 0, 0.05) ==
          Catch::Approx(0.035647932250560327).epsilon(1e-12));
    CHECK(binom_pmf(65, 0, 0.05) ==
          Catch::Approx(std::exp(65.0 * std::log1p(-0.05))).epsilon(1e-14));
}

TEST_CASE("binom_pmf large-n accuracy (10 significant digits)", "[binomial]") {
    // frozen from an exact rational oracle
    CHECK(binom_pmf(1000, 500, 0.5) ==
          Catch::Approx(0.025225018178360802).epsilon(1e-10));
    CHECK(binom_pmf(1000, 999, 0.999) ==
          Catch::Approx(0.36806348825922327).epsilon(1e-10));
    CHECK(binom_pmf(10000, 5000, 0.5) ==
          Catch::Approx(0.0079786461393821538).epsilon(1e-10));
}

TEST_CASE("binom_pmf domain errors", "[binomial]") {
    CHECK_THROWS_AS(binom_pmf(5, 6, 0.5), std::domain_error);
    CHECK_THROWS_AS(binom_pmf(5, -1, 0.5), std::domain_error);
    CHECK_THROWS_AS(binom_pmf(0, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(binom_pmf(5, 2, -0.1), std::domain_error);
    CHECK_THROWS_AS(binom_pmf(5, 2, 1.1), std::domain_error);
}

TEST_CASE("binom_cdf basic values", "[binomial]") {
    CHECK(binom_cdf(10, 10, 0.37) == 1.0);
    CHECK(binom_cdf(10, 0, 0.0) == 1.0);
    CHECK(binom_cdf(10, 9, 1.0) == 0.0);
    CHECK(binom_cdf(10, 10, 1.0) == 1.0);

    // frozen from an exact rational oracle
    CHECK(binom_cdf(65, 6, 0.05) ==
          Catch::Approx(0.95671310885879377).epsilon(1e-10));
    CHECK(binom_cdf(65, 6, 0.14) ==
          Catch::Approx(0.17750280175489902).epsilon(1e-10));
    CHECK(binom_cdf(600, 10, 0.02) ==
          Catch::Approx(0.34510785555622282).epsilon(1e-10));
    // anchored recurrence must survive (1-p)^n underflow
    CHECK(binom_cdf(1000, 999, 0.999) ==
          Catch::Approx(0.63230457522903596).epsilon(1e-10));
}

TEST_CASE("binom_cdf matches exhaustive enumeration up to n=20", "[binomial]") {
    for (int n : {1, 2, 3, 5, 8, 12, 15, 20}) {
        for (double p : {0.1, 0.37, 0.5, 0.9}) {
            const auto oracle = enumeration_cdf(n, p);
            for (int c = 0; c <= n; ++c) {
                INFO("n=" << n << " c=" << c << " p=" << p);
                CHECK(binom_cdf(n, c, p) == Catch::Approx(oracle[c]).margin(1e-10));
            }
        }
    }
}

TEST_CASE("pmf normalization within 1e-12 up to n=1000", "[binomial]") {
    const std::vector<double> ps = {0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6,   0.7,  0.8, 0.9, 0.99, 0.999};
    for (long n : {1L, 2L, 3L, 7L, 10L, 65L, 100L, 333L, 1000L}) {
        for (double p : ps) {
            double sum = 0.0;
            for (long k = 0; k <= n; ++k) sum += binom_pmf(n, k, p);
            INFO("n=" << n << " p=" << p);
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("binom_cdf monotone in c and in p", "[binomial]") {
    for (double p : {0.05, 0.3, 0.77}) {
        double prev = -1.0;
        for (long c = 0; c <= 40; ++c) {
            const double v = binom_cdf(40, c, p);
            CHECK(v >= prev);
            prev = v;
        }
    }
    double prev = 2.0;
    for (int j = 0; j <= 200; ++j) {
        const double v = binom_cdf(65, 6, j / 200.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("clamp01 tolerates roundoff, rejects real excursions", "[binomial]") {
    CHECK(clamp01(-1e-13) == 0.0);
    CHECK(clamp01(1.0 + 1e-13) == 1.0);
    CHECK(clamp01(0.5) == 0.5);
    CHECK_THROWS_AS(clamp01(-1e-9), std::logic_error);
    CHECK_THROWS_AS(clamp01(1.1), std::logic_error);
}
