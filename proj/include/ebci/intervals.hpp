#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebci/kernels.hpp"
#include "ebci/lpreg.hpp"

namespace ebci::intervals {

enum class Side { two_sided, upper, lower };
enum class Mode { fixed_eta, eta_free };
enum class BoundaryMode { automatic, interior, left, right };

// Scale factor d_n multiplying the bias-budget-free radius. Either a slowly
// growing power n^tau or log(n) loglog(n); clamped below at 1 so the radius
// never shrinks under the purely stochastic term.
struct EtaFreePolicy {
    enum class Kind { power, loglog };
    Kind kind = Kind::power;
    double tau = 0.001;

    double d_n(std::size_t n) const;
};

struct IntervalResult {
    double center = 0.0;
    double radius = 0.0;
    double lower = 0.0;  // -inf for Side::upper
    double upper = 0.0;  // +inf for Side::lower
    double h = 0.0;      // bandwidth the center was computed at
    double t = 0.0;      // calibration level feeding the radius
    double proxy = 0.0;  // variance proxy value
    Side side = Side::two_sided;
    Mode mode = Mode::eta_free;
    int order = 0;
    double alpha = 0.0;
    std::optional<double> eta;   // fixed-eta runs
    std::optional<double> d_n;   // eta-free runs
    bool boundary = false;       // resolved boundary status
    std::size_t n = 0;
    std::vector<std::string> warnings;
};

// Stochastic radius with an explicit bias budget eta h^S, already optimized
// over h: (2S+1)(1 + (log n)^-3) eta^{1/(2S+1)}
//         * (2 log(1/t) cv / (4S^2))^{S/(2S+1)} n^{-S/(2S+1)}.
double radius_fixed_eta(double cv_hat, double t, int order, double eta, std::size_t n);

// Budget-free radius d_n (2 log(1/t) cv / n)^{S/(2S+1)}.
double radius_eta_free(double cv_hat, double t, int order, std::size_t n,
                       const EtaFreePolicy& policy);

// Regression intervals. Two-sided fixed-eta and boundary runs calibrate the
// radius at t = alpha/2; the eta-free interior two-sided interval may use
// the unified level t = alpha (unified_calibration).
IntervalResult ebci_regression_fixed_eta(const lpreg::Sample& s, double x0, int order,
                                         double alpha, double eta, Side side,
                                         BoundaryMode boundary,
                                         const kernels::KernelSpec& kernel);
IntervalResult ebci_regression_eta_free(const lpreg::Sample& s, double x0, int order,
                                        double alpha, Side side,
                                        const EtaFreePolicy& policy,
                                        BoundaryMode boundary,
                                        const kernels::KernelSpec& kernel,
                                        bool unified_calibration);

// Density intervals; the estimator switches to a one-sided moment kernel at
// a resolved boundary.
IntervalResult ebci_density_fixed_eta(std::span<const double> xs, double x0, int order,
                                      double alpha, double eta, Side side,
                                      BoundaryMode boundary,
                                      const kernels::KernelSpec& base_kernel);
IntervalResult ebci_density_eta_free(std::span<const double> xs, double x0, int order,
                                     double alpha, Side side,
                                     const EtaFreePolicy& policy, BoundaryMode boundary,
                                     const kernels::KernelSpec& base_kernel);

// Kernel density estimate (1/(n h)) sum K((x_i - x0)/h).
double kde(std::span<const double> xs, double x0, double h,
           const kernels::DensityKernel& kernel);

}  // namespace ebci::intervals
