#include "ebci/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ebci/errors.hpp"

namespace ebci::baselines {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadInput("alpha must lie in (0, 1)");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) throw BadInput("quantile level must lie in (0, 1)");

    // Rational initial approximation (central and tail branches), then two
    // Halley corrections against the erfc-based cdf.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    for (int pass = 0; pass < 2 && 0.5 * x * x < 700.0; ++pass) {
        const double e = normal_cdf(x) - p;
        const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double snc_two_sided_coverage(double alpha, double a)
{
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double t = std::abs(a);
    return normal_cdf(z - t) + normal_cdf(z + t) - 1.0;
}

double snc_coverage_loss_lower_bound(double alpha, double a)
{
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - alpha / 2.0);
    return 0.25 * z * normal_pdf(z) * a * a;
}

double folded_normal_quantile(double t, double alpha)
{
    check_alpha(alpha);
    if (!(t >= 0.0) || !std::isfinite(t))
        throw BadInput("folded-normal noncentrality must be finite and >= 0");

    const double target = 1.0 - alpha;
    const auto folded_cdf = [t](double c) {
        return normal_cdf(c - t) + normal_cdf(c + t) - 1.0;
    };

    double lo = 0.0;
    double hi = t + normal_quantile(1.0 - alpha / 2.0) + 1.0;
    while (folded_cdf(hi) < target) hi *= 2.0;  // paranoia; the start suffices

    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (folded_cdf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double flci_radius(double se, double worst_bias, double alpha, IntervalSide side)
{
    check_alpha(alpha);
    if (!(se > 0.0)) throw BadInput("standard error must be positive");
    if (!(worst_bias >= 0.0)) throw BadInput("worst-case bias must be >= 0");

    if (side == IntervalSide::two_sided)
        return se * folded_normal_quantile(worst_bias / se, alpha);
    return se * normal_quantile(1.0 - alpha) + worst_bias;
}

namespace {

void check_radius_inputs(double eta, double cv, std::size_t n, int order, double alpha)
{
    check_alpha(alpha);
    if (!(eta > 0.0)) throw BadInput("bias scale eta must be positive");
    if (!(cv > 0.0)) throw BadInput("variance constant must be positive");
    if (n < 1) throw BadInput("sample size must be positive");
    if (order < 1) throw BadInput("polynomial order must be at least 1");
}

// h that produces normalized bias t when the bias budget is eta h^S and the
// variance is cv / (n h): t = eta h^{S + 1/2} sqrt(n / cv).
double bandwidth_from_bias_ratio(double t, double eta, double cv, std::size_t n,
                                 int order)
{
    return std::pow(t * std::sqrt(cv / static_cast<double>(n)) / eta,
                    2.0 / (2.0 * order + 1.0));
}

}  // namespace

OptimizedFlci flci_optimized_radius(double eta, double cv, std::size_t n, int order,
                                    double alpha, IntervalSide side)
{
    check_radius_inputs(eta, cv, n, order, alpha);
    const double s = order;
    const double expo = s / (2.0 * s + 1.0);
    const double prefactor = std::pow(eta, 1.0 / (2.0 * s + 1.0)) *
                             std::pow(cv / static_cast<double>(n), expo);

    OptimizedFlci out;
    if (side != IntervalSide::two_sided) {
        const double z = normal_quantile(1.0 - alpha);
        out.t_star = z / (2.0 * s);
        out.radius = (2.0 * s + 1.0) *
                     std::pow(z * z * cv / (4.0 * s * s), expo) *
                     std::pow(eta, 1.0 / (2.0 * s + 1.0)) *
                     std::pow(static_cast<double>(n), -expo);
        out.h_star = bandwidth_from_bias_ratio(out.t_star, eta, cv, n, order);
        return out;
    }

    // Two-sided: minimize t^{-1/(2S+1)} * cv_{1-alpha}(t) numerically. The
    // objective is smooth with a single interior dip in practice, but
    // nothing here assumes convexity: a log-spaced scan brackets the best
    // seed and golden-section polishes it.
    const double z2 = normal_quantile(1.0 - alpha / 2.0);
    const auto objective = [&](double t) {
        return std::pow(t, -1.0 / (2.0 * s + 1.0)) * folded_normal_quantile(t, alpha);
    };

    const int grid_size = 64;
    const double t_min = 1e-6, t_max = 20.0 * z2;
    const double log_step = std::log(t_max / t_min) / (grid_size - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> ts(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        ts[i] = t_min * std::exp(log_step * i);
        const double v = objective(ts[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }

    double lo = ts[std::max(0, best - 1)];
    double hi = ts[std::min(grid_size - 1, best + 1)];
    const double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > 1e-8 * hi) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(x2);
        }
    }
    out.t_star = 0.5 * (lo + hi);
    out.radius = prefactor * objective(out.t_star);
    out.h_star = bandwidth_from_bias_ratio(out.t_star, eta, cv, n, order);
    return out;
}

double ebci_oracle_radius(double eta, double cv, std::size_t n, int order,
                          double alpha, IntervalSide side)
{
    check_radius_inputs(eta, cv, n, order, alpha);
    const double s = order;
    const double expo = s / (2.0 * s + 1.0);
    const double lam = side == IntervalSide::two_sided ? 2.0 * std::log(2.0 / alpha)
                                                       : 2.0 * std::log(1.0 / alpha);
    return (2.0 * s + 1.0) * std::pow(eta, 1.0 / (2.0 * s + 1.0)) *
           std::pow(lam * cv / (4.0 * s * s), expo) *
           std::pow(static_cast<double>(n), -expo);
}

std::vector<RadiusComparison> radius_equivalence_report(double eta, double cv,
                                                        std::size_t n, int order,
                                                        std::span<const double> alphas)
{
    const double s = order;
    const double expo = s / (2.0 * s + 1.0);
    std::vector<RadiusComparison> rows;
    rows.reserve(alphas.size());
    for (const double alpha : alphas) {
        check_radius_inputs(eta, cv, n, order, alpha);
        RadiusComparison r;
        r.alpha = alpha;
        r.eb_one = ebci_oracle_radius(eta, cv, n, order, alpha, IntervalSide::upper);
        r.eb_two = ebci_oracle_radius(eta, cv, n, order, alpha, IntervalSide::two_sided);
        r.flci_one =
            flci_optimized_radius(eta, cv, n, order, alpha, IntervalSide::upper).radius;
        // small-alpha leading form of the optimized two-sided FLCI: the
        // folded critical value degenerates to sqrt(2 log(1/alpha)).
        r.flci_two = (2.0 * s + 1.0) * std::pow(eta, 1.0 / (2.0 * s + 1.0)) *
                     std::pow(2.0 * std::log(1.0 / alpha) * cv / (4.0 * s * s), expo) *
                     std::pow(static_cast<double>(n), -expo);
        r.ratio_one = r.eb_one / r.flci_one;
        r.ratio_two = r.eb_two / r.flci_two;
        rows.push_back(r);
    }
    return rows;
}

Rational::Rational(long long n, long long d) : num(n), den(d)
{
    if (den == 0) throw BadInput("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

double Rational::value() const { return static_cast<double>(num) / static_cast<double>(den); }

std::string Rational::str() const
{
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational(a.num * b.num, a.den * b.den);
}

std::vector<RateEntry> rate_table(std::span<const int> p_values)
{
    std::vector<RateEntry> rows;
    for (const int p : p_values) {
        if (p < 1) throw BadInput("competing order p must be at least 1");

        const auto fill_odd = [p](RateEntry& e) {
            e.rbc_length = Rational(p + 3, 2 * (p + 4));
            e.rbc_coverage_error = Rational(p + 3, p + 4);
            e.ebci_length = Rational(p + 3, 2 * p + 7);
            e.ebci_coverage_error = Rational(2 * (p + 3), 2 * p + 7);
        };
        const auto fill_even = [p](RateEntry& e) {
            e.rbc_length = Rational(p + 2, 2 * (p + 3));
            e.rbc_coverage_error = Rational(p + 2, p + 3);
            e.ebci_length = Rational(p + 2, 2 * p + 5);
            e.ebci_coverage_error = Rational(2 * (p + 2), 2 * p + 5);
        };

        for (const auto estimand :
             {RateEntry::Estimand::regression, RateEntry::Estimand::density}) {
            RateEntry odd;
            odd.p = p;
            odd.setting = RateEntry::Setting::interior;
            odd.estimand = estimand;
            odd.parity = RateEntry::Parity::odd;
            fill_odd(odd);

            RateEntry even = odd;
            even.parity = RateEntry::Parity::even;
            fill_even(even);

            RateEntry bdy = even;
            bdy.setting = RateEntry::Setting::boundary;
            bdy.parity = RateEntry::Parity::none;

            if (estimand == RateEntry::Estimand::density) {
                odd.ebci_ce_exponential = true;
                even.ebci_ce_exponential = true;
                bdy.ebci_ce_exponential = true;
            }
            rows.push_back(odd);
            rows.push_back(even);
            rows.push_back(bdy);
        }
    }
    return rows;
}

}  // namespace ebci::baselines
