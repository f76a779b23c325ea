#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace ebci::concentration {

// One-sided empirical Bernstein deviation bound for independent bounded
// variables. `deviation` bounds the average's shortfall below its mean
// (paired variant) or the mean's excess over the average (known-mean
// variant) with probability at least 1 - alpha.
struct EBBound {
    double deviation = 0.0;      // variance_term + linear_term
    double variance_term = 0.0;  // sqrt(2 * v_n * A1)
    double linear_term = 0.0;    // range-driven remainder
    double v_n = 0.0;            // empirical variance surrogate
    double alpha = 0.0;
    std::size_t n_original = 0;  // observations supplied
    std::size_t n_effective = 0; // observations the bound actually uses
    bool dropped_last = false;   // odd input length, paired variant only
    // Looser closed form available for the known-mean variant; always at
    // least `deviation`.
    std::optional<double> simplified;
};

// Paired variant: consecutive observations are differenced to estimate the
// variance without knowing the means. Odd input length drops the final
// observation (recorded via dropped_last / n_effective). Requires at least
// two observations, values inside [range_lo, range_hi], alpha in (0,1).
EBBound eb_bound_paired(std::span<const double> values, double range_lo,
                        double range_hi, double alpha);

// Known-mean variant: squared deviations from the supplied per-observation
// means replace the paired differences; all observations are used.
EBBound eb_bound_known_mean(std::span<const double> values,
                            std::span<const double> means, double range_lo,
                            double range_hi, double alpha);

}  // namespace ebci::concentration
