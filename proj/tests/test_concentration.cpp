// Empirical Bernstein deviation bounds: frozen arithmetic examples,
// structural identities (scale equivariance, odd-length handling,
// monotonicity), and a Monte Carlo check of the coverage guarantee.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebci/concentration.hpp"
#include "ebci/errors.hpp"
#include "oracles.hpp"

using ebci::concentration::eb_bound_known_mean;
using ebci::concentration::eb_bound_paired;

TEST_CASE("constant samples have zero variance surrogate")
{
    const std::vector<double> v(8, 0.42);
    const auto b = eb_bound_paired(v, 0.0, 1.0, 0.05);
    CHECK(b.v_n == 0.0);
    CHECK(b.variance_term == 0.0);
    CHECK(b.deviation == b.linear_term);
    CHECK(b.n_effective == 8);
    CHECK_FALSE(b.dropped_last);
}

TEST_CASE("paired bound on (0,1,0,1): frozen arithmetic")
{
    const std::vector<double> v{0.0, 1.0, 0.0, 1.0};
    const auto b = eb_bound_paired(v, 0.0, 1.0, 0.05);
    CHECK(b.v_n == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b.variance_term == doctest::Approx(3.62403882209).epsilon(1e-10));
    CHECK(b.linear_term == doctest::Approx(10.4466403764).epsilon(1e-10));
    CHECK(b.deviation == doctest::Approx(14.0706791985).epsilon(1e-10));
    CHECK_FALSE(b.simplified.has_value());
}

TEST_CASE("known-mean bound: frozen arithmetic and the looser closed form")
{
    const std::vector<double> v{0.2, 0.8, 0.5};
    const std::vector<double> mu{0.5, 0.5, 0.5};
    const auto b = eb_bound_known_mean(v, mu, 0.0, 1.0, 0.1);
    CHECK(b.v_n == doctest::Approx(0.18).epsilon(1e-15));
    CHECK(b.variance_term == doctest::Approx(0.987369268509).epsilon(1e-10));
    CHECK(b.linear_term == doctest::Approx(8.53127888318).epsilon(1e-10));
    CHECK(b.deviation == doctest::Approx(9.51864815169).epsilon(1e-10));
    REQUIRE(b.simplified.has_value());
    CHECK(*b.simplified == doctest::Approx(9.86599922953).epsilon(1e-10));
    CHECK(b.n_effective == 3);  // no pairing, nothing dropped
}

TEST_CASE("affine equivariance: shifting and scaling data and range")
{
    oracle::Rng rng(31u);
    std::vector<double> v(20);
    for (double& x : v) x = rng.uniform();
    const double shift = -1.3, scale = 0.25;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = shift + scale * v[i];

    const auto b0 = eb_bound_paired(v, 0.0, 1.0, 0.05);
    const auto b1 = eb_bound_paired(w, shift, shift + scale, 0.05);
    CHECK(b1.deviation == doctest::Approx(scale * b0.deviation).epsilon(1e-12));
    CHECK(b1.variance_term == doctest::Approx(scale * b0.variance_term).epsilon(1e-12));
    CHECK(b1.linear_term == doctest::Approx(scale * b0.linear_term).epsilon(1e-12));
}

TEST_CASE("odd length: last observation is dropped and recorded")
{
    const std::vector<double> five{0.1, 0.9, 0.4, 0.6, 0.99};
    const std::vector<double> four{0.1, 0.9, 0.4, 0.6};
    const auto b5 = eb_bound_paired(five, 0.0, 1.0, 0.05);
    const auto b4 = eb_bound_paired(four, 0.0, 1.0, 0.05);
    CHECK(b5.dropped_last);
    CHECK(b5.n_original == 5);
    CHECK(b5.n_effective == 4);
    CHECK(b5.deviation == doctest::Approx(b4.deviation).epsilon(1e-15));
}

TEST_CASE("deviation shrinks as alpha grows, simplified form is never tighter")
{
    oracle::Rng rng(77u);
    std::vector<double> v(40), mu(40, 0.5);
    for (double& x : v) x = rng.uniform();

    double prev = 1e300;
    for (const double alpha : {0.01, 0.05, 0.1, 0.3, 0.6}) {
        const auto b = eb_bound_paired(v, 0.0, 1.0, alpha);
        CHECK(b.deviation < prev);
        prev = b.deviation;

        const auto k = eb_bound_known_mean(v, mu, 0.0, 1.0, alpha);
        REQUIRE(k.simplified.has_value());
        CHECK(*k.simplified >= k.deviation);
    }
}

TEST_CASE("input validation")
{
    const std::vector<double> v{0.2, 0.4, 0.6, 0.8};
    CHECK_THROWS_AS(eb_bound_paired(v, 0.0, 1.0, 0.0), ebci::BadInput);
    CHECK_THROWS_AS(eb_bound_paired(v, 0.0, 1.0, 1.0), ebci::BadInput);
    CHECK_THROWS_AS(eb_bound_paired(v, 1.0, 0.0, 0.05), ebci::BadInput);
    CHECK_THROWS_AS(eb_bound_paired(v, 0.3, 1.0, 0.05), ebci::BadInput);  // 0.2 below lo
    CHECK_THROWS_AS(eb_bound_paired(std::vector<double>{0.5}, 0.0, 1.0, 0.05),
                    ebci::BadInput);
    const std::vector<double> mu{0.5, 0.5};
    CHECK_THROWS_AS(eb_bound_known_mean(v, mu, 0.0, 1.0, 0.05), ebci::BadInput);
    const std::vector<double> mu_bad{0.5, 0.5, 0.5, 1.5};
    CHECK_THROWS_AS(eb_bound_known_mean(v, mu_bad, 0.0, 1.0, 0.05), ebci::BadInput);
}

TEST_CASE("Monte Carlo: the one-sided guarantee holds for Bernoulli sums")
{
    // P( sum_i (mu_i - x_i) <= deviation ) >= 1 - alpha. With B = 2e4 the
    // empirical frequency should clear the nominal floor comfortably (the
    // bound is conservative at this n).
    const std::size_t n = 50, B = 20000;
    const double p = 0.3, alpha = 0.1;
    oracle::Rng rng(123456u);
    std::size_t hit = 0;
    std::vector<double> x(n);
    for (std::size_t b = 0; b < B; ++b) {
        double sum_dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform() < p ? 1.0 : 0.0;
            sum_dev += p - x[i];
        }
        const auto eb = eb_bound_paired(x, 0.0, 1.0, alpha);
        if (sum_dev <= eb.deviation) ++hit;
    }
    CHECK(static_cast<double>(hit) / static_cast<double>(B) >= 1.0 - alpha);
}
