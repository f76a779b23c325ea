#pragma once

#include <cstddef>
#include <vector>

namespace ebci::bandwidth {

// Uniform bandwidth grid j * spacing, j = 1..count, with
// spacing = n^{-1/(2S+1)} / (log n)^3 and count = floor((log n)^4).
// Requires n >= 3 so the grid is nonempty.
struct BandwidthGrid {
    std::vector<double> points;
    double spacing = 0.0;
    std::size_t n = 0;
    int order = 0;

    double front() const { return points.front(); }
    double back() const { return points.back(); }
};

BandwidthGrid build_grid(std::size_t n, int order);

// Plug-in bandwidth (2 log(1/t) cv / (4 S^2 eta^2 n))^{1/(2S+1)} balancing
// the stochastic radius against the worst-case bias eta h^S.
double plugin_bandwidth(double cv_hat, double t, int order, double eta, std::size_t n);

// Nearest grid point; exact midpoints resolve to the smaller point, values
// beyond the ends clamp to the extremes.
double project_to_grid(double h, const BandwidthGrid& grid);

// Infeasible-benchmark version of the plug-in rule (true variance constant
// supplied directly).
double oracle_bandwidth(double cv, double alpha, int order, double eta, std::size_t n);

}  // namespace ebci::bandwidth
