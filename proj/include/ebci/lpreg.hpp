#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ebci/kernels.hpp"

namespace ebci::lpreg {

struct Sample {
    std::vector<double> xs;
    std::vector<double> ys;

    std::size_t size() const { return xs.size(); }
    // throws BadInput on length mismatch, empty data, or non-finite entries
    void validate() const;
};

struct WeightSet {
    std::vector<double> weights;  // length n; zero off-window
    double x0 = 0.0;
    double h = 0.0;
    int order = 0;
    std::size_t effective_count = 0;  // observations with positive kernel weight
    double condition = 0.0;           // 1-norm condition estimate of the local design
};

// Order-S local polynomial weights at x0 with bandwidth h: the row of the
// smoother picking out the fitted value. Covariates are shifted so the
// evaluation point is 0 and scaled by h before the design matrix is formed;
// the system M a = e0 is solved directly (no inverse). Throws
// InsufficientLocalData when fewer than S+1 observations carry positive
// kernel weight or the local design has condition estimate > 1e12.
WeightSet lp_weights(std::span<const double> xs, double x0, double h, int order,
                     const kernels::KernelSpec& kernel);

// Fitted regression value at x0: sum of W_i * Y_i.
double lp_fit(const Sample& s, double x0, double h, int order,
              const kernels::KernelSpec& kernel);

// Full local fit, for callers that also need the coefficient vector (e.g.
// residuals against the local polynomial) or the weights.
struct LocalFit {
    std::vector<double> beta;  // coefficients in u = (x - x0)/h coordinates
    WeightSet weights;

    double value() const { return beta.empty() ? 0.0 : beta[0]; }
    double predict(double x) const;  // polynomial evaluated at (x - x0)/h
};

LocalFit local_fit(const Sample& s, double x0, double h, int order,
                   const kernels::KernelSpec& kernel);

// Leave-one-out pilot predictions: for each requested index i, the local
// polynomial fit at x = X_i with bandwidth b computed from all observations
// except i. Data problems never abort the whole pass; a singular or starved
// local fit falls back to the local mean without i, then to the global mean
// without i. Requires n >= 2.
std::vector<double> loo_pilot_predictions(const Sample& s, double b,
                                          int pilot_order,
                                          const kernels::KernelSpec& kernel);

// Same fallback chain, restricted to `indices`; result is aligned with
// `indices`. This is the variance-proxy fast path (only in-window points
// need pilots).
std::vector<double> loo_pilot_at(const Sample& s, double b, int pilot_order,
                                 const kernels::KernelSpec& kernel,
                                 std::span<const std::size_t> indices);

}  // namespace ebci::lpreg
