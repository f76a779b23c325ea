#include "ebci/kernels.hpp"

#include <cmath>

#include "ebci/errors.hpp"
#include "ebci/quadrature.hpp"

namespace ebci::kernels {

double KernelSpec::operator()(double u) const {
    if (u < lo() || u > hi()) return 0.0;
    switch (family) {
        case Family::epanechnikov: return 0.75 * (1.0 - u * u);
        case Family::uniform: return 0.5;
        case Family::triangular: return 1.0 - std::fabs(u);
    }
    return 0.0;
}

double KernelSpec::sup() const {
    switch (family) {
        case Family::epanechnikov: return 0.75;
        case Family::uniform: return 0.5;
        case Family::triangular: return 1.0;
    }
    return 0.0;
}

bool is_theory_admissible(Family f) { return f != Family::uniform; }

std::vector<double> poly_basis(double u, int order) {
    if (order < 1) throw BadInput("poly_basis: order must be >= 1");
    std::vector<double> r(order + 1);
    r[0] = 1.0;
    for (int k = 1; k <= order; ++k) r[k] = r[k - 1] * u;
    return r;
}

linalg::Matrix moment_matrix(const KernelSpec& k, int order, int kernel_power) {
    if (order < 1) throw BadInput("moment_matrix: order must be >= 1");
    if (kernel_power < 1) throw BadInput("moment_matrix: kernel power must be >= 1");

    // Entry (i, j) depends only on i+j: integrate each needed power once.
    std::vector<double> mom(2 * order + 1);
    for (int p = 0; p <= 2 * order; ++p) {
        mom[p] = quadrature::integrate(
            [&](double u) {
                double kv = k(u);
                double kp = kv;
                for (int q = 1; q < kernel_power; ++q) kp *= kv;
                return kp * std::pow(u, p);
            },
            k.lo(), k.hi(), 1e-12);
    }
    linalg::Matrix m(order + 1);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; j <= order; ++j) m(i, j) = mom[i + j];
    return m;
}

namespace {

// Both the equivalent kernel and the density kernel solve Gamma_1 c = e0.
std::vector<double> moment_system_coeffs(const KernelSpec& k, int order) {
    const linalg::Matrix g1 = moment_matrix(k, order, 1);
    if (!linalg::is_positive_definite(g1))
        throw NumericError("kernel moment matrix is not positive definite");
    std::vector<double> e0(order + 1, 0.0);
    e0[0] = 1.0;
    return linalg::solve(g1, e0);
}

double weighted_poly(const KernelSpec& base, const std::vector<double>& c, double u) {
    const double kv = base(u);
    if (kv == 0.0) return 0.0;
    double p = 0.0, up = 1.0;
    for (double ck : c) { p += ck * up; up *= u; }
    return kv * p;
}

}  // namespace

double EquivalentKernel::operator()(double u) const {
    return weighted_poly(base, coeffs, u);
}

EquivalentKernel equivalent_kernel(const KernelSpec& k, int order) {
    return {k, moment_system_coeffs(k, order)};
}

double DensityKernel::operator()(double u) const {
    return weighted_poly(base, coeffs, u);
}

DensityKernel density_kernel(const KernelSpec& base, int order) {
    return {base, moment_system_coeffs(base, order)};
}

}  // namespace ebci::kernels
