#include "ebci/dgp.hpp"

#include <cmath>

#include "ebci/errors.hpp"

namespace ebci::sim {

double cusp_mean(double x, double delta)
{
    const double bump = x > 0.0 ? 24.0 * std::pow(x, 3.0 + delta) : 0.0;
    return 1.0 + x + 2.0 * x * x + 4.0 * x * x * x + bump;
}

double ccf_mean(double x)
{
    constexpr double pi = 3.14159265358979323846;
    const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return std::sin(1.5 * pi * x) / (1.0 + 18.0 * x * x * (sgn + 1.0));
}

double skewed_error(RngStream& rng)
{
    return (rng.gamma2() - 2.0) / std::sqrt(2.0);
}

namespace {

double draw_x(Region region, RngStream& rng)
{
    return region == Region::interior ? rng.uniform(-1.0, 1.0) : rng.uniform01();
}

}  // namespace

lpreg::Sample gen_cusp(const CuspParams& p, std::size_t n, RngStream& rng)
{
    if (!(p.delta > 0.0)) throw BadInput("cusp exponent delta must be positive");
    if (n == 0) throw BadInput("sample size must be positive");

    lpreg::Sample s;
    s.xs.resize(n);
    s.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.xs[i] = draw_x(p.region, rng);
        const double eps =
            p.errors == ErrorKind::normal ? rng.normal() : skewed_error(rng);
        s.ys[i] = cusp_mean(s.xs[i], p.delta) + eps;
    }
    return s;
}

lpreg::Sample gen_ccf(std::size_t n, RngStream& rng)
{
    if (n == 0) throw BadInput("sample size must be positive");
    lpreg::Sample s;
    s.xs.resize(n);
    s.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.xs[i] = rng.uniform(-1.0, 1.0);
        s.ys[i] = ccf_mean(s.xs[i]) + rng.normal();
    }
    return s;
}

std::vector<double> gen_uniform_density(Region region, std::size_t n, RngStream& rng)
{
    if (n == 0) throw BadInput("sample size must be positive");
    std::vector<double> xs(n);
    for (double& x : xs) x = draw_x(region, rng);
    return xs;
}

double uniform_density_value(Region region)
{
    return region == Region::interior ? 0.5 : 1.0;
}

}  // namespace ebci::sim
