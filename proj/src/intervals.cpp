#include "ebci/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebci/bandwidth.hpp"
#include "ebci/errors.hpp"
#include "ebci/variance.hpp"

namespace ebci::intervals {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_common(double x0, int order, double alpha)
{
    if (!std::isfinite(x0)) throw BadInput("evaluation point must be finite");
    if (order < 1) throw BadInput("polynomial order must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadInput("alpha must lie in (0, 1)");
}

struct BoundaryResolution {
    bool is_boundary = false;
    bool reflected = false;  // right edge mapped onto the left-edge code path
};

// Automatic rule: x0 within one rate-bandwidth n^{-1/(2S+1)} of the data
// extremes counts as boundary, nearer edge wins.
BoundaryResolution resolve_boundary(std::span<const double> xs, double x0, int order,
                                    BoundaryMode mode)
{
    BoundaryResolution r;
    switch (mode) {
        case BoundaryMode::interior:
            return r;
        case BoundaryMode::left:
            r.is_boundary = true;
            return r;
        case BoundaryMode::right:
            r.is_boundary = true;
            r.reflected = true;
            return r;
        case BoundaryMode::automatic:
            break;
    }
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double h_nv =
        std::pow(static_cast<double>(xs.size()), -1.0 / (2.0 * order + 1.0));
    const double d_lo = std::abs(x0 - *lo_it);
    const double d_hi = std::abs(x0 - *hi_it);
    if (d_lo < h_nv || d_hi < h_nv) {
        r.is_boundary = true;
        r.reflected = d_hi < d_lo;
    }
    return r;
}

// Calibration level feeding the radius. One-sided intervals always use
// alpha; two-sided intervals split it unless the unified interior rule is
// in force.
double calibration_level(Side side, double alpha, bool unified)
{
    if (side != Side::two_sided) return alpha;
    return unified ? alpha : alpha / 2.0;
}

void finish_endpoints(IntervalResult& r)
{
    switch (r.side) {
        case Side::two_sided:
            r.lower = r.center - r.radius;
            r.upper = r.center + r.radius;
            break;
        case Side::upper:
            r.lower = -kInf;
            r.upper = r.center + r.radius;
            break;
        case Side::lower:
            r.lower = r.center - r.radius;
            r.upper = kInf;
            break;
    }
}

// Bandwidth for the point estimate in fixed-eta mode: the plug-in value
// projected onto the admissible grid, with degenerate and clamped cases
// flagged.
double select_plugin_bandwidth(double proxy_value, double t, int order, double eta,
                               std::size_t n, std::vector<std::string>* warnings)
{
    const auto grid = bandwidth::build_grid(n, order);
    if (!(proxy_value > 0.0)) {
        warnings->push_back(
            "variance proxy is zero: taking the smallest grid bandwidth and a "
            "zero-width stochastic term");
        return grid.front();
    }
    const double h_hat = bandwidth::plugin_bandwidth(proxy_value, t, order, eta, n);
    const double h = bandwidth::project_to_grid(h_hat, grid);
    if (h_hat < grid.front())
        warnings->push_back("plug-in bandwidth fell below the grid and was clamped up");
    else if (h_hat > grid.back())
        warnings->push_back("plug-in bandwidth exceeded the grid and was clamped down");
    return h;
}

}  // namespace

double EtaFreePolicy::d_n(std::size_t n) const
{
    if (n < 2) throw BadInput("eta-free scale needs n >= 2");
    double d;
    if (kind == Kind::power) {
        if (!(tau > 0.0)) throw BadInput("eta-free power tau must be positive");
        d = std::pow(static_cast<double>(n), tau);
    } else {
        const double ln = std::log(static_cast<double>(n));
        d = ln * std::log(ln);
    }
    return std::max(d, 1.0);
}

double radius_fixed_eta(double cv_hat, double t, int order, double eta, std::size_t n)
{
    if (!(cv_hat >= 0.0)) throw BadInput("variance proxy must be >= 0");
    if (!(t > 0.0 && t < 1.0)) throw BadInput("calibration level must lie in (0, 1)");
    if (!(eta > 0.0)) throw BadInput("bias scale eta must be positive");
    if (order < 1) throw BadInput("polynomial order must be at least 1");
    if (n < 2) throw BadInput("radius needs n >= 2");

    const double s = order;
    const double logn = std::log(static_cast<double>(n));
    const double xi = 1.0 / (logn * logn * logn);
    return (2.0 * s + 1.0) * (1.0 + xi) * std::pow(eta, 1.0 / (2.0 * s + 1.0)) *
           std::pow(2.0 * std::log(1.0 / t) * cv_hat / (4.0 * s * s),
                    s / (2.0 * s + 1.0)) *
           std::pow(static_cast<double>(n), -s / (2.0 * s + 1.0));
}

double radius_eta_free(double cv_hat, double t, int order, std::size_t n,
                       const EtaFreePolicy& policy)
{
    if (!(cv_hat >= 0.0)) throw BadInput("variance proxy must be >= 0");
    if (!(t > 0.0 && t < 1.0)) throw BadInput("calibration level must lie in (0, 1)");
    if (order < 1) throw BadInput("polynomial order must be at least 1");

    const double s = order;
    return policy.d_n(n) *
           std::pow(2.0 * std::log(1.0 / t) * cv_hat / static_cast<double>(n),
                    s / (2.0 * s + 1.0));
}

IntervalResult ebci_regression_fixed_eta(const lpreg::Sample& s, double x0, int order,
                                         double alpha, double eta, Side side,
                                         BoundaryMode boundary,
                                         const kernels::KernelSpec& kernel)
{
    s.validate();
    check_common(x0, order, alpha);
    if (!(eta > 0.0)) throw BadInput("bias scale eta must be positive");

    const auto res = resolve_boundary(s.xs, x0, order, boundary);
    lpreg::Sample work;
    const lpreg::Sample* data = &s;
    if (res.reflected) {
        work.xs.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) work.xs[i] = 2.0 * x0 - s.xs[i];
        work.ys = s.ys;
        data = &work;
    }

    IntervalResult out;
    out.side = side;
    out.mode = Mode::fixed_eta;
    out.order = order;
    out.alpha = alpha;
    out.eta = eta;
    out.boundary = res.is_boundary;
    out.n = s.size();
    out.t = calibration_level(side, alpha, /*unified=*/false);

    const auto proxy = variance::regression_proxy(*data, x0, order, kernel);
    out.proxy = proxy.value;
    out.h = select_plugin_bandwidth(proxy.value, out.t, order, eta, s.size(),
                                    &out.warnings);
    out.center = lpreg::lp_fit(*data, x0, out.h, order, kernel);
    out.radius = proxy.value > 0.0
                     ? radius_fixed_eta(proxy.value, out.t, order, eta, s.size())
                     : 0.0;
    finish_endpoints(out);
    return out;
}

IntervalResult ebci_regression_eta_free(const lpreg::Sample& s, double x0, int order,
                                        double alpha, Side side,
                                        const EtaFreePolicy& policy,
                                        BoundaryMode boundary,
                                        const kernels::KernelSpec& kernel,
                                        bool unified_calibration)
{
    s.validate();
    check_common(x0, order, alpha);

    const auto res = resolve_boundary(s.xs, x0, order, boundary);
    lpreg::Sample work;
    const lpreg::Sample* data = &s;
    if (res.reflected) {
        work.xs.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) work.xs[i] = 2.0 * x0 - s.xs[i];
        work.ys = s.ys;
        data = &work;
    }

    IntervalResult out;
    out.side = side;
    out.mode = Mode::eta_free;
    out.order = order;
    out.alpha = alpha;
    out.boundary = res.is_boundary;
    out.n = s.size();
    out.d_n = policy.d_n(s.size());
    // unified calibration is an interior-only concession
    out.t = calibration_level(side, alpha, unified_calibration && !res.is_boundary);

    const auto proxy = variance::regression_proxy(*data, x0, order, kernel);
    out.proxy = proxy.value;
    out.h = proxy.g;  // rate bandwidth n^{-1/(2S+1)}
    out.center = lpreg::lp_fit(*data, x0, out.h, order, kernel);
    if (!(proxy.value > 0.0))
        out.warnings.push_back(
            "variance proxy is zero: the interval degenerates to the point estimate");
    out.radius = radius_eta_free(proxy.value, out.t, order, s.size(), policy);
    finish_endpoints(out);
    return out;
}

double kde(std::span<const double> xs, double x0, double h,
           const kernels::DensityKernel& kernel)
{
    if (xs.empty()) throw BadInput("density sample is empty");
    if (!(h > 0.0) || !std::isfinite(h)) throw BadInput("bandwidth must be positive");
    double acc = 0.0;
    for (const double x : xs) acc += kernel((x - x0) / h);
    return acc / (static_cast<double>(xs.size()) * h);
}

namespace {

IntervalResult density_interval(std::span<const double> xs, double x0, int order,
                                double alpha, std::optional<double> eta, Side side,
                                const EtaFreePolicy* policy, BoundaryMode boundary,
                                const kernels::KernelSpec& base_kernel)
{
    check_common(x0, order, alpha);
    if (xs.size() < 4) throw BadInput("density interval needs at least 4 observations");

    const auto res = resolve_boundary(xs, x0, order, boundary);
    std::vector<double> reflected;
    std::span<const double> data = xs;
    if (res.reflected) {
        reflected.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) reflected[i] = 2.0 * x0 - xs[i];
        data = reflected;
    }

    // At a boundary the moment conditions must hold on the one-sided
    // window, so the kernel itself switches.
    kernels::KernelSpec spec = base_kernel;
    spec.support =
        res.is_boundary ? kernels::Support::boundary : kernels::Support::interior;
    const auto kern = kernels::density_kernel(spec, order);

    IntervalResult out;
    out.side = side;
    out.mode = eta ? Mode::fixed_eta : Mode::eta_free;
    out.order = order;
    out.alpha = alpha;
    out.eta = eta;
    out.boundary = res.is_boundary;
    out.n = xs.size();
    // the unified interior rule is a regression-side concession only
    out.t = calibration_level(side, alpha, /*unified=*/false);

    const auto proxy = variance::density_proxy(data, x0, kern);
    out.proxy = proxy.value;
    if (proxy.effective_count == 0)
        out.warnings.push_back("no observations in the kernel window at the proxy "
                               "bandwidth: zero-width stochastic term");

    if (eta) {
        out.h = select_plugin_bandwidth(proxy.value, out.t, order, *eta, xs.size(),
                                        &out.warnings);
        out.radius = proxy.value > 0.0
                         ? radius_fixed_eta(proxy.value, out.t, order, *eta, xs.size())
                         : 0.0;
    } else {
        out.d_n = policy->d_n(xs.size());
        out.h = std::pow(static_cast<double>(xs.size()),
                         -1.0 / (2.0 * order + 1.0));
        out.radius = radius_eta_free(proxy.value, out.t, order, xs.size(), *policy);
    }
    out.center = kde(data, x0, out.h, kern);
    finish_endpoints(out);
    return out;
}

}  // namespace

IntervalResult ebci_density_fixed_eta(std::span<const double> xs, double x0, int order,
                                      double alpha, double eta, Side side,
                                      BoundaryMode boundary,
                                      const kernels::KernelSpec& base_kernel)
{
    if (!(eta > 0.0)) throw BadInput("bias scale eta must be positive");
    return density_interval(xs, x0, order, alpha, eta, side, nullptr, boundary,
                            base_kernel);
}

IntervalResult ebci_density_eta_free(std::span<const double> xs, double x0, int order,
                                     double alpha, Side side,
                                     const EtaFreePolicy& policy, BoundaryMode boundary,
                                     const kernels::KernelSpec& base_kernel)
{
    return density_interval(xs, x0, order, alpha, std::nullopt, side, &policy, boundary,
                            base_kernel);
}

}  // namespace ebci::intervals
