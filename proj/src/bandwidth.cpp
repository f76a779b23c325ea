#include "ebci/bandwidth.hpp"

#include <cmath>

#include "ebci/errors.hpp"

namespace ebci::bandwidth {

BandwidthGrid build_grid(std::size_t n, int order)
{
    if (order < 1) throw BadInput("polynomial order must be at least 1");
    if (n < 3) throw BadInput("bandwidth grid needs n >= 3");

    const double logn = std::log(static_cast<double>(n));
    const double log3 = logn * logn * logn;

    BandwidthGrid g;
    g.n = n;
    g.order = order;
    g.spacing = std::pow(static_cast<double>(n), -1.0 / (2.0 * order + 1.0)) / log3;
    const auto count = static_cast<std::size_t>(std::floor(log3 * logn));
    g.points.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        g.points[j] = static_cast<double>(j + 1) * g.spacing;
    return g;
}

double plugin_bandwidth(double cv_hat, double t, int order, double eta, std::size_t n)
{
    if (!(cv_hat > 0.0)) throw BadInput("variance proxy must be positive");
    if (!(t > 0.0 && t < 1.0)) throw BadInput("calibration level must lie in (0, 1)");
    if (!(eta > 0.0)) throw BadInput("bias scale eta must be positive");
    if (order < 1) throw BadInput("polynomial order must be at least 1");
    if (n < 1) throw BadInput("sample size must be positive");

    const double s = order;
    return std::pow(2.0 * std::log(1.0 / t) * cv_hat /
                        (4.0 * s * s * eta * eta * static_cast<double>(n)),
                    1.0 / (2.0 * s + 1.0));
}

double project_to_grid(double h, const BandwidthGrid& grid)
{
    if (grid.points.empty()) throw BadInput("bandwidth grid is empty");
    if (!(h >= 0.0) || !std::isfinite(h))
        throw BadInput("bandwidth to project must be finite and non-negative");

    const double s = grid.spacing;
    const auto count = grid.points.size();
    // candidate indices around h/spacing, clamped into [1, count]
    const double x = h / s;
    std::size_t j_lo;
    if (x >= static_cast<double>(count))
        j_lo = count;
    else if (x < 1.0)
        j_lo = 1;
    else
        j_lo = static_cast<std::size_t>(std::floor(x));
    const std::size_t j_hi = j_lo < count ? j_lo + 1 : count;

    const double lo = static_cast<double>(j_lo) * s;
    const double hi = static_cast<double>(j_hi) * s;
    // ties go to the smaller point
    return std::abs(h - lo) <= std::abs(h - hi) ? lo : hi;
}

double oracle_bandwidth(double cv, double alpha, int order, double eta, std::size_t n)
{
    return plugin_bandwidth(cv, alpha, order, eta, n);
}

}  // namespace ebci::bandwidth
