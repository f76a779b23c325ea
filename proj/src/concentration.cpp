#include "ebci/concentration.hpp"

#include <cmath>
#include <string>

#include "ebci/errors.hpp"

namespace ebci::concentration {

namespace {

void check_inputs(std::span<const double> values, double range_lo, double range_hi,
                  double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadInput("alpha must lie in (0, 1)");
    if (!(range_hi > range_lo) || !std::isfinite(range_lo) || !std::isfinite(range_hi))
        throw BadInput("range bounds must be finite with range_hi > range_lo");
    if (values.size() < 2)
        throw BadInput("empirical Bernstein bound needs at least 2 observations");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= range_lo && values[i] <= range_hi))
            throw BadInput("observation " + std::to_string(i) +
                           " falls outside the stated range");
    }
}

// Deviation = sqrt(2 V A1) + L with
//   A1 = log(n / ((n-1) alpha)),  A2 = log(2n / alpha),
//   L  = (b - a) A1 / 3 + (b - a) (sqrt(5/3) + 1) sqrt(A1 A2).
EBBound assemble(double v_n, double range, double alpha, std::size_t n_eff)
{
    const double n = static_cast<double>(n_eff);
    const double a1 = std::log(n / ((n - 1.0) * alpha));
    const double a2 = std::log(2.0 * n / alpha);
    EBBound b;
    b.v_n = v_n;
    b.alpha = alpha;
    b.n_effective = n_eff;
    b.variance_term = std::sqrt(2.0 * v_n * a1);
    b.linear_term = range * a1 / 3.0 + range * (std::sqrt(5.0 / 3.0) + 1.0) *
                                           std::sqrt(a1 * a2);
    b.deviation = b.variance_term + b.linear_term;
    return b;
}

}  // namespace

EBBound eb_bound_paired(std::span<const double> values, double range_lo,
                        double range_hi, double alpha)
{
    check_inputs(values, range_lo, range_hi, alpha);
    std::size_t n = values.size();
    const bool odd = n % 2 != 0;
    if (odd) --n;  // variance surrogate needs pairs; the last point is unused

    double v_n = 0.0;
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        const double d = values[i] - values[i + 1];
        v_n += d * d;
    }

    EBBound b = assemble(v_n, range_hi - range_lo, alpha, n);
    b.n_original = values.size();
    b.dropped_last = odd;
    return b;
}

EBBound eb_bound_known_mean(std::span<const double> values,
                            std::span<const double> means, double range_lo,
                            double range_hi, double alpha)
{
    check_inputs(values, range_lo, range_hi, alpha);
    if (means.size() != values.size())
        throw BadInput("means and values must have equal length");
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (!(means[i] >= range_lo && means[i] <= range_hi))
            throw BadInput("mean " + std::to_string(i) +
                           " falls outside the stated range");
    }

    double v_n = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - means[i];
        v_n += d * d;
    }

    EBBound b = assemble(v_n, range_hi - range_lo, alpha, values.size());
    b.n_original = values.size();

    const double n = static_cast<double>(values.size());
    b.simplified = std::sqrt(2.0 * v_n * std::log(1.0 / alpha)) +
                   std::sqrt(2.0 * v_n / (n - 1.0)) + b.linear_term;
    return b;
}

}  // namespace ebci::concentration
