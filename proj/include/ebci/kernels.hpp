#pragma once

#include <vector>

#include "ebci/linalg.hpp"

namespace ebci::kernels {

enum class Family { epanechnikov, uniform, triangular };

// Which piece of the kernel's support the data can occupy: interior fits see
// covariates on [-1, 1] after rescaling, boundary fits (evaluation point at
// the left support edge) only on [0, 1].
enum class Support { interior, boundary };

struct KernelSpec {
    Family family = Family::epanechnikov;
    Support support = Support::interior;

    double lo() const { return support == Support::interior ? -1.0 : 0.0; }
    double hi() const { return 1.0; }

    // K(u); zero outside [lo, hi].
    double operator()(double u) const;

    // sup of K over the support.
    double sup() const;
};

// Epanechnikov and triangular are bounded and Lipschitz, which is what the
// interval theory assumes. The uniform kernel jumps at the support edges and
// is shipped for experimentation only; callers building theory constants
// should check this first.
bool is_theory_admissible(Family f);

// (1, u, u^2, ..., u^order)
std::vector<double> poly_basis(double u, int order);

// Moment matrix of the kernel: entry (i, j) = integral of K(u)^kernel_power
// * u^(i+j) over the support, i, j = 0..order. kernel_power 1 gives the
// local-polynomial design limit (positive definite for admissible kernels),
// power 2 appears in variance limits. Entries by adaptive quadrature to
// 1e-12 absolute.
linalg::Matrix moment_matrix(const KernelSpec& k, int order, int kernel_power);

// l(u) = K(u) * c'r(u) with c solving Gamma_1 c = e0: the limiting weight
// shape of an order-S local polynomial fit. Boundary specs use the one-sided
// moment matrix and yield the boundary-corrected shape.
struct EquivalentKernel {
    KernelSpec base;
    std::vector<double> coeffs;
    double operator()(double u) const;
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

EquivalentKernel equivalent_kernel(const KernelSpec& k, int order);

// Order-S density kernel K_I(u) = p(u) K(u), p of degree S, solving the
// moment system: integral K_I = 1 and integral u^k K_I = 0 for k = 1..S.
// The system matrix is the base kernel's moment matrix, so this is the same
// linear solve as the equivalent kernel; it is kept as its own entry point
// because the density estimator owns this contract (and its own tests).
struct DensityKernel {
    KernelSpec base;
    std::vector<double> coeffs;
    double operator()(double u) const;
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

DensityKernel density_kernel(const KernelSpec& base, int order);

}  // namespace ebci::kernels
