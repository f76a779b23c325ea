// Local polynomial fits: reproduction identities, hand-checked weights,
// equivalent-kernel agreement on a dense design, and the leave-one-out
// pilot fallback chain.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ebci/errors.hpp"
#include "ebci/kernels.hpp"
#include "ebci/lpreg.hpp"
#include "oracles.hpp"

using ebci::kernels::Family;
using ebci::kernels::KernelSpec;
using ebci::kernels::Support;
using ebci::lpreg::Sample;

namespace {

const KernelSpec kEpan{Family::epanechnikov, Support::interior};

Sample random_sample(oracle::Rng& rng, std::size_t n, double lo, double hi)
{
    Sample s;
    s.xs.resize(n);
    s.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.xs[i] = lo + (hi - lo) * rng.uniform();
        s.ys[i] = rng.normal();
    }
    return s;
}

}  // namespace

TEST_CASE("weights on a tiny symmetric design, by hand")
{
    // xs = {-0.5, 0, 0.5}, x0 = 0, h = 1, order 1, Epanechnikov:
    // kernel values (0.5625, 0.75, 0.5625), the odd moment cancels, so
    // W_i = K_i / sum K = (0.3, 0.4, 0.3).
    const std::vector<double> xs{-0.5, 0.0, 0.5};
    const auto w = ebci::lpreg::lp_weights(xs, 0.0, 1.0, 1, kEpan);
    REQUIRE(w.weights.size() == 3);
    CHECK(w.weights[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(w.weights[2] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(w.effective_count == 3);

    Sample s;
    s.xs = xs;
    s.ys = {1.0, 2.0, 4.0};
    CHECK(ebci::lpreg::lp_fit(s, 0.0, 1.0, 1, kEpan) ==
          doctest::Approx(0.3 * 1 + 0.4 * 2 + 0.3 * 4).epsilon(1e-12));
}

TEST_CASE("reproduction identities on random designs")
{
    // The smoother row must reproduce constants exactly and annihilate the
    // centered powers (x - x0)^s for s = 1..order.
    oracle::Rng rng(20240901u);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 80 + static_cast<std::size_t>(rng.uniform() * 200);
        const bool one_sided = rep % 3 == 0;
        Sample s = random_sample(rng, n, one_sided ? 0.0 : -1.0, 1.0);
        const double x0 = one_sided ? 0.0 : (rng.uniform() - 0.5);
        const double h = 0.2 + 0.5 * rng.uniform();
        const int order = 1 + rep % 3;

        const auto w = ebci::lpreg::lp_weights(s.xs, x0, h, order, kEpan);
        double sum = 0.0;
        for (double wi : w.weights) sum += wi;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

        for (int p = 1; p <= order; ++p) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                m += w.weights[i] * std::pow(s.xs[i] - x0, p);
            CHECK(std::abs(m) <= 1e-8 * std::pow(h, p));
        }
    }
}

TEST_CASE("polynomials of the fit order are reproduced exactly")
{
    oracle::Rng rng(7u);
    Sample s = random_sample(rng, 400, -1.0, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = s.xs[i];
        s.ys[i] = 1.5 - 2.0 * x + 0.75 * x * x - 0.3 * x * x * x;
    }
    const auto poly = [](double x) {
        return 1.5 - 2.0 * x + 0.75 * x * x - 0.3 * x * x * x;
    };
    for (const double x0 : {-0.4, 0.0, 0.55}) {
        CHECK(ebci::lpreg::lp_fit(s, x0, 0.4, 3, kEpan) ==
              doctest::Approx(poly(x0)).epsilon(1e-9));
    }

    // Full fit: coefficients predict the cubic anywhere in the window, and
    // the level coefficient agrees with the weighted value.
    const auto fit = ebci::lpreg::local_fit(s, 0.1, 0.4, 3, kEpan);
    CHECK(fit.value() == doctest::Approx(poly(0.1)).epsilon(1e-9));
    CHECK(fit.predict(0.3) == doctest::Approx(poly(0.3)).epsilon(1e-8));
    double dot = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) dot += fit.weights.weights[i] * s.ys[i];
    CHECK(fit.value() == doctest::Approx(dot).epsilon(1e-10));
}

TEST_CASE("starved or degenerate windows raise InsufficientLocalData")
{
    const std::vector<double> xs{-0.9, 0.05, 0.9};

    // Too few points for a cubic anywhere.
    try {
        ebci::lpreg::lp_weights(xs, 0.0, 1.0, 3, kEpan);
        FAIL("expected InsufficientLocalData");
    } catch (const ebci::InsufficientLocalData& e) {
        CHECK(e.effective_count == 3);
    }

    // Empty window.
    try {
        ebci::lpreg::lp_weights(xs, 10.0, 0.5, 1, kEpan);
        FAIL("expected InsufficientLocalData");
    } catch (const ebci::InsufficientLocalData& e) {
        CHECK(e.effective_count == 0);
    }

    // Duplicated covariate: the local design is rank one.
    const std::vector<double> dup{0.1, 0.1, 0.1, 0.1};
    CHECK_THROWS_AS(ebci::lpreg::lp_weights(dup, 0.0, 1.0, 1, kEpan),
                    ebci::InsufficientLocalData);
}

TEST_CASE("sample validation")
{
    Sample s;
    s.xs = {0.0, 1.0};
    s.ys = {0.0};
    CHECK_THROWS_AS(s.validate(), ebci::BadInput);
    s.ys = {0.0, std::nan("")};
    CHECK_THROWS_AS(s.validate(), ebci::BadInput);
    s.ys = {0.0, 1.0};
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(ebci::lpreg::lp_fit(s, 0.5, 0.0, 1, kEpan), ebci::BadInput);
    CHECK_THROWS_AS(ebci::lpreg::lp_fit(s, 0.5, 0.4, 0, kEpan), ebci::BadInput);
}

TEST_CASE("weights track the equivalent kernel on a dense uniform design")
{
    // Deterministic grid on [-1, 1] (density 1/2), interior point: the
    // weight on observation i should be close to l(u_i) / (n h f).
    const std::size_t n = 100000;
    const double h = 0.1;
    const double f = 0.5;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);

    for (const int order : {1, 3}) {
        const auto w = ebci::lpreg::lp_weights(xs, 0.0, h, order, kEpan);
        const auto l = ebci::kernels::equivalent_kernel(kEpan, order);
        const double scale = static_cast<double>(n) * h * f;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = xs[i] / h;
            const double approx = std::abs(u) <= 1.0 ? l(u) / scale : 0.0;
            worst = std::max(worst, std::abs(w.weights[i] - approx));
        }
        // Coarse envelope: discretization error is far below the weight
        // scale 1/(n h f) here.
        CHECK(worst <= 5.0 / (static_cast<double>(n) * h) *
                           (h + std::pow(static_cast<double>(n), -1.0 / 3.0)));
    }
}

TEST_CASE("leave-one-out pilots reproduce a line and fall back sanely")
{
    // Healthy case: local-linear pilots are exact on linear truth.
    oracle::Rng rng(99u);
    Sample lin = random_sample(rng, 300, -1.0, 1.0);
    for (std::size_t i = 0; i < lin.size(); ++i) lin.ys[i] = 2.0 + 3.0 * lin.xs[i];
    const auto preds = ebci::lpreg::loo_pilot_predictions(lin, 0.3, 1, kEpan);
    REQUIRE(preds.size() == lin.size());
    for (std::size_t i = 0; i < lin.size(); ++i)
        CHECK(preds[i] == doctest::Approx(2.0 + 3.0 * lin.xs[i]).epsilon(1e-9));

    // Empty windows: global mean without the held-out point.
    Sample far;
    far.xs = {0.0, 10.0, 20.0, 30.0};
    far.ys = {1.0, 2.0, 3.0, 10.0};
    const auto g = ebci::lpreg::loo_pilot_predictions(far, 1e-6, 1, kEpan);
    CHECK(g[0] == doctest::Approx((2.0 + 3.0 + 10.0) / 3.0).epsilon(1e-12));
    CHECK(g[3] == doctest::Approx((1.0 + 2.0 + 3.0) / 3.0).epsilon(1e-12));

    // One usable neighbour: local mean is that neighbour.
    Sample near;
    near.xs = {0.0, 1e-7, 5.0, 9.0};
    near.ys = {4.0, -2.0, 7.0, 8.0};
    const auto lm = ebci::lpreg::loo_pilot_at(near, 1e-6, 1, kEpan,
                                              std::vector<std::size_t>{0});
    CHECK(lm[0] == doctest::Approx(-2.0).epsilon(1e-12));

    // Degenerate window (all remaining covariates identical): local mean.
    Sample dup;
    dup.xs = {0.0, 0.0, 0.0};
    dup.ys = {5.0, 1.0, 3.0};
    const auto dm = ebci::lpreg::loo_pilot_predictions(dup, 0.5, 1, kEpan);
    CHECK(dm[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dm[1] == doctest::Approx(4.0).epsilon(1e-12));

    // Subset call aligns with the full pass.
    const auto sub = ebci::lpreg::loo_pilot_at(lin, 0.3, 1, kEpan,
                                               std::vector<std::size_t>{5, 0, 17});
    CHECK(sub[0] == doctest::Approx(preds[5]).epsilon(1e-14));
    CHECK(sub[1] == doctest::Approx(preds[0]).epsilon(1e-14));
    CHECK(sub[2] == doctest::Approx(preds[17]).epsilon(1e-14));

    CHECK_THROWS_AS(ebci::lpreg::loo_pilot_predictions(lin, -0.1, 1, kEpan),
                    ebci::BadInput);
}
