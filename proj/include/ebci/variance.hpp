#pragma once

#include <cstddef>
#include <span>

#include "ebci/kernels.hpp"
#include "ebci/lpreg.hpp"

namespace ebci::variance {

// Data-driven scale for the stochastic half of the interval radius. For
// regression it estimates sigma^2(x0) * int l^2 / f(x0); for densities it
// estimates f(x0) * int K_I^2. Both are plugged into the same radius
// formulas downstream.
struct VarianceProxy {
    double value = 0.0;
    double g = 0.0;                   // proxy bandwidth n^{-1/(2S+1)}
    double pilot_bandwidth = 0.0;     // regression leave-one-out variant only
    std::size_t effective_count = 0;  // observations actually contributing
    std::size_t n_effective = 0;      // density variant: length after odd drop
    bool dropped_last = false;        // density variant: odd input length
};

// Leave-one-out variant: squared smoother weights at bandwidth g times
// squared residuals against local-linear pilots fitted at each X_i with
// bandwidth n^{-1/3}, scaled by n*g. Throws InsufficientLocalData if the
// window at x0 cannot support the fit.
VarianceProxy regression_proxy(const lpreg::Sample& s, double x0, int order,
                               const kernels::KernelSpec& kernel);

// Single-fit variant: residuals against the one fitted value at x0 with the
// same bandwidth g. Cheaper, coarser; same limit.
VarianceProxy regression_proxy_simple(const lpreg::Sample& s, double x0, int order,
                                      const kernels::KernelSpec& kernel);

// Density variant: consecutive observations are paired and the scaled
// kernel evaluations differenced, so no pilot fit is needed. Odd length
// drops the last observation (recorded). Requires n >= 4.
VarianceProxy density_proxy(std::span<const double> xs, double x0,
                            const kernels::DensityKernel& kernel);

}  // namespace ebci::variance
