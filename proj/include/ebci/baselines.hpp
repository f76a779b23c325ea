#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ebci::baselines {

// Standard normal distribution helpers (quantile is accurate to ~1e-14
// across the usable range; both tails).
double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

// Coverage of the conventional two-sided z-interval when the standardized
// estimator carries residual bias a: Phi(z - a) + Phi(z + a) - 1.
double snc_two_sided_coverage(double alpha, double a);

// Quadratic lower bound on the coverage shortfall of that interval,
// (1/4) z phi(z) a^2, valid for |a| <= z.
double snc_coverage_loss_lower_bound(double alpha, double a);

// Upper 1-alpha quantile of |N(t, 1)|, found by bisection to ~1e-12.
double folded_normal_quantile(double t, double alpha);

enum class IntervalSide { two_sided, upper, lower };

// Fixed-length interval radius given a standard error and a worst-case
// absolute bias: two-sided uses the folded-normal critical value at
// t = worst_bias / se; one-sided adds the bias to the z-radius.
double flci_radius(double se, double worst_bias, double alpha, IntervalSide side);

// Radius of the fixed-length interval after optimizing the bandwidth
// against the bias budget eta h^S with variance constant cv / (n h).
struct OptimizedFlci {
    double radius = 0.0;
    double h_star = 0.0;  // optimal bandwidth
    double t_star = 0.0;  // optimal normalized bias
};
OptimizedFlci flci_optimized_radius(double eta, double cv, std::size_t n, int order,
                                    double alpha, IntervalSide side);

// Benchmark radius of the empirical-Bernstein interval with the true
// variance constant and optimized bandwidth.
double ebci_oracle_radius(double eta, double cv, std::size_t n, int order,
                          double alpha, IntervalSide side);

// Side-by-side oracle radii and their ratios across confidence levels.
struct RadiusComparison {
    double alpha = 0.0;
    double eb_one = 0.0;
    double flci_one = 0.0;
    double eb_two = 0.0;
    double flci_two = 0.0;  // small-alpha leading form of the optimized FLCI
    double ratio_one = 0.0;
    double ratio_two = 0.0;
};
std::vector<RadiusComparison> radius_equivalence_report(double eta, double cv,
                                                        std::size_t n, int order,
                                                        std::span<const double> alphas);

// Exact rational arithmetic for the rate table.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);  // reduces, normalizes sign
    double value() const;
    std::string str() const;  // "4/9", integers without denominator
    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator*(const Rational& a, const Rational& b);

// One row of the convergence-rate table: length and coverage-error
// exponents (powers of 1/n up to log factors) for the bias-corrected
// benchmark and for this interval family.
struct RateEntry {
    int p = 0;  // polynomial order of the competing procedure
    enum class Setting { interior, boundary } setting = Setting::interior;
    enum class Estimand { regression, density } estimand = Estimand::regression;
    enum class Parity { odd, even, none } parity = Parity::none;  // formula branch
    Rational rbc_length;
    Rational rbc_coverage_error;
    Rational ebci_length;
    Rational ebci_coverage_error;
    // density rows: coverage error decays faster than any polynomial; the
    // rational column is kept for the structural 2x identity.
    bool ebci_ce_exponential = false;
};

std::vector<RateEntry> rate_table(std::span<const int> p_values);

}  // namespace ebci::baselines
