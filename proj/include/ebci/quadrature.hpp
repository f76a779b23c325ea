#pragma once

#include <functional>

namespace ebci::quadrature {

// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b] to an absolute
// tolerance (default 1e-12). Bisects panels whose Kronrod-vs-Gauss error
// estimate exceeds their share of the budget. Throws NumericError if the
// subdivision depth limit is hit before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

}  // namespace ebci::quadrature
