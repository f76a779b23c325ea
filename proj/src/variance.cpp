#include "ebci/variance.hpp"

#include <cmath>
#include <vector>

#include "ebci/errors.hpp"

namespace ebci::variance {

namespace {

double proxy_bandwidth(std::size_t n, int order)
{
    return std::pow(static_cast<double>(n), -1.0 / (2.0 * order + 1.0));
}

}  // namespace

VarianceProxy regression_proxy(const lpreg::Sample& s, double x0, int order,
                               const kernels::KernelSpec& kernel)
{
    s.validate();
    const std::size_t n = s.size();
    VarianceProxy out;
    out.g = proxy_bandwidth(n, order);
    out.pilot_bandwidth = std::pow(static_cast<double>(n), -1.0 / 3.0);

    const auto w = lpreg::lp_weights(s.xs, x0, out.g, order, kernel);
    std::vector<std::size_t> active;
    active.reserve(w.effective_count);
    for (std::size_t i = 0; i < n; ++i)
        if (w.weights[i] != 0.0) active.push_back(i);
    out.effective_count = active.size();
    out.n_effective = n;

    const auto pilots = lpreg::loo_pilot_at(s, out.pilot_bandwidth, 1, kernel, active);
    double acc = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t i = active[k];
        const double r = s.ys[i] - pilots[k];
        acc += w.weights[i] * w.weights[i] * r * r;
    }
    out.value = static_cast<double>(n) * out.g * acc;
    return out;
}

VarianceProxy regression_proxy_simple(const lpreg::Sample& s, double x0, int order,
                                      const kernels::KernelSpec& kernel)
{
    s.validate();
    const std::size_t n = s.size();
    VarianceProxy out;
    out.g = proxy_bandwidth(n, order);
    out.pilot_bandwidth = out.g;  // one bandwidth does both jobs here

    const auto w = lpreg::lp_weights(s.xs, x0, out.g, order, kernel);
    double fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) fit += w.weights[i] * s.ys[i];

    double acc = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w.weights[i] == 0.0) continue;
        ++active;
        const double r = s.ys[i] - fit;
        acc += w.weights[i] * w.weights[i] * r * r;
    }
    out.effective_count = active;
    out.n_effective = n;
    out.value = static_cast<double>(n) * out.g * acc;
    return out;
}

VarianceProxy density_proxy(std::span<const double> xs, double x0,
                            const kernels::DensityKernel& kernel)
{
    if (xs.size() < 4)
        throw BadInput("density variance proxy needs at least 4 observations");
    for (const double x : xs)
        if (!std::isfinite(x)) throw BadInput("density sample contains a non-finite value");

    std::size_t n = xs.size();
    const bool odd = n % 2 != 0;
    if (odd) --n;  // everything, bandwidth included, runs on the paired prefix

    VarianceProxy out;
    out.g = proxy_bandwidth(n, kernel.order());
    out.n_effective = n;
    out.dropped_last = odd;

    double acc = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        const double a = kernel((xs[i] - x0) / out.g);
        const double b = kernel((xs[i + 1] - x0) / out.g);
        if (a != 0.0 || b != 0.0) ++active;
        const double d = a - b;
        acc += d * d;
    }
    out.effective_count = active;
    out.value = acc / (static_cast<double>(n) * out.g);
    return out;
}

}  // namespace ebci::variance
