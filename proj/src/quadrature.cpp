#include "ebci/quadrature.hpp"

#include <cmath>

#include "ebci/errors.hpp"

namespace ebci::quadrature {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK dqk15 constants).
// xk holds the positive Kronrod abscissae; odd indices are the embedded
// 7-point Gauss nodes.
constexpr double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(c);
    double result_gauss = wg[3] * fc;
    double result_kronrod = wk[7] * fc;

    for (int j = 0; j < 7; ++j) {
        const double x = half * xk[j];
        const double fsum = f(c - x) + f(c + x);
        result_kronrod += wk[j] * fsum;
        if (j % 2 == 1) result_gauss += wg[j / 2] * fsum;
    }
    result_gauss *= half;
    result_kronrod *= half;

    return {result_kronrod, std::fabs(result_kronrod - result_gauss)};
}

double refine(const std::function<double(double)>& f, double a, double b,
              double tol, int depth) {
    const PanelResult r = gk15(f, a, b);
    if (r.error <= tol || r.error <= 1e-17 * std::fabs(r.value)) return r.value;
    if (depth >= 60)
        throw NumericError("quadrature: depth limit before tolerance reached");
    const double c = 0.5 * (a + b);
    return refine(f, a, c, 0.5 * tol, depth + 1) +
           refine(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0.0)) throw BadInput("integrate: tolerance must be positive");
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);
    return sign * refine(f, a, b, abs_tol, 0);
}

}  // namespace ebci::quadrature
