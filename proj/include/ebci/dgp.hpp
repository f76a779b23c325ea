#pragma once

#include <cstddef>
#include <vector>

#include "ebci/lpreg.hpp"
#include "ebci/rng.hpp"

namespace ebci::sim {

enum class ErrorKind { normal, skewed_gamma };
enum class Region { interior, boundary };  // X ~ U[-1,1] vs U[0,1]

// Cubic polynomial plus a one-sided power bump: smooth of order 3 away
// from 0, and the bump's excess exponent delta controls how close the truth
// sits to the edge of the third-order class.
double cusp_mean(double x, double delta);

// Smooth curve with sharply different curvature on the two half-lines;
// sign(0) = 0 so the damping factor is 1 at the origin.
double ccf_mean(double x);

// Standardized skewed error: (G - 2)/sqrt(2) with G ~ Gamma(2,1); mean 0,
// variance 1, skewness sqrt(2).
double skewed_error(RngStream& rng);

struct CuspParams {
    double delta = 1.0;
    ErrorKind errors = ErrorKind::normal;
    Region region = Region::interior;
};

lpreg::Sample gen_cusp(const CuspParams& p, std::size_t n, RngStream& rng);
lpreg::Sample gen_ccf(std::size_t n, RngStream& rng);  // interior design, N(0,1) errors
std::vector<double> gen_uniform_density(Region region, std::size_t n, RngStream& rng);

// f(x0) for the uniform designs above (1/2 interior, 1 boundary).
double uniform_density_value(Region region);

}  // namespace ebci::sim
