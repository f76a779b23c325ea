#include "ebci/lpreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ebci/errors.hpp"
#include "ebci/linalg.hpp"

namespace ebci::lpreg {

namespace {

constexpr double kConditionLimit = 1e12;

// Local design matrix and right-hand sides live on (order+1) coefficients;
// anything beyond degree 8 is outside what this estimator is for.
constexpr int kMaxOrder = 8;

void check_order(int order)
{
    if (order < 1 || order > kMaxOrder)
        throw BadInput("polynomial order must be between 1 and " + std::to_string(kMaxOrder));
}

}  // namespace

void Sample::validate() const
{
    if (xs.size() != ys.size())
        throw BadInput("sample has " + std::to_string(xs.size()) + " covariates but " +
                       std::to_string(ys.size()) + " responses");
    if (xs.empty())
        throw BadInput("sample is empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw BadInput("sample contains a non-finite value at row " + std::to_string(i));
    }
}

namespace {

struct LocalSystem {
    std::vector<std::size_t> idx;  // rows with positive kernel weight
    std::vector<double> u;         // scaled covariate per row
    std::vector<double> kv;        // kernel value per row
    linalg::Matrix m{1};           // sum of kv * r(u) r(u)^T
    double condition = 0.0;
};

LocalSystem build_local_system(std::span<const double> xs, double x0, double h,
                               int order, const kernels::KernelSpec& kernel)
{
    check_order(order);
    if (!(h > 0.0) || !std::isfinite(h))
        throw BadInput("bandwidth must be positive and finite");
    if (!std::isfinite(x0))
        throw BadInput("evaluation point must be finite");

    LocalSystem sys;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double u = (xs[i] - x0) / h;
        const double kv = kernel(u);
        if (kv > 0.0) {
            sys.idx.push_back(i);
            sys.u.push_back(u);
            sys.kv.push_back(kv);
        }
    }
    if (sys.idx.size() < static_cast<std::size_t>(order) + 1)
        throw InsufficientLocalData(
            "local fit at " + std::to_string(x0) + " has only " +
                std::to_string(sys.idx.size()) + " observations in window (needs " +
                std::to_string(order + 1) + ")",
            sys.idx.size());

    const int dim = order + 1;
    sys.m = linalg::Matrix(dim);
    std::vector<double> r(dim);
    for (std::size_t row = 0; row < sys.idx.size(); ++row) {
        r[0] = 1.0;
        for (int s = 1; s < dim; ++s) r[s] = r[s - 1] * sys.u[row];
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) sys.m(a, b) += sys.kv[row] * r[a] * r[b];
    }
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < a; ++b) sys.m(a, b) = sys.m(b, a);

    sys.condition = linalg::condition_1norm(sys.m);
    if (!(sys.condition < kConditionLimit))
        throw InsufficientLocalData(
            "local design at " + std::to_string(x0) +
                " is numerically degenerate (condition estimate " +
                std::to_string(sys.condition) + ")",
            sys.idx.size());
    return sys;
}

}  // namespace

WeightSet lp_weights(std::span<const double> xs, double x0, double h, int order,
                     const kernels::KernelSpec& kernel)
{
    LocalSystem sys = build_local_system(xs, x0, h, order, kernel);

    const int dim = order + 1;
    std::vector<double> e0(dim, 0.0);
    e0[0] = 1.0;
    const std::vector<double> a = linalg::solve(sys.m, e0);

    WeightSet w;
    w.weights.assign(xs.size(), 0.0);
    w.x0 = x0;
    w.h = h;
    w.order = order;
    w.effective_count = sys.idx.size();
    w.condition = sys.condition;
    for (std::size_t row = 0; row < sys.idx.size(); ++row) {
        double poly = a[dim - 1];
        for (int s = dim - 2; s >= 0; --s) poly = poly * sys.u[row] + a[s];
        w.weights[sys.idx[row]] = sys.kv[row] * poly;
    }
    return w;
}

double lp_fit(const Sample& s, double x0, double h, int order,
              const kernels::KernelSpec& kernel)
{
    s.validate();
    const WeightSet w = lp_weights(s.xs, x0, h, order, kernel);
    double out = 0.0;
    for (std::size_t i = 0; i < s.xs.size(); ++i) out += w.weights[i] * s.ys[i];
    return out;
}

double LocalFit::predict(double x) const
{
    const double u = (x - weights.x0) / weights.h;
    double poly = beta.empty() ? 0.0 : beta.back();
    for (std::size_t s = beta.size(); s-- > 1;) poly = poly * u + beta[s - 1];
    return poly;
}

LocalFit local_fit(const Sample& s, double x0, double h, int order,
                   const kernels::KernelSpec& kernel)
{
    s.validate();
    LocalSystem sys = build_local_system(s.xs, x0, h, order, kernel);

    const int dim = order + 1;
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t row = 0; row < sys.idx.size(); ++row) {
        const double ky = sys.kv[row] * s.ys[sys.idx[row]];
        double upow = 1.0;
        for (int a = 0; a < dim; ++a) {
            rhs[a] += ky * upow;
            upow *= sys.u[row];
        }
    }

    LocalFit fit;
    fit.beta = linalg::solve(sys.m, rhs);
    fit.weights.weights.assign(s.xs.size(), 0.0);
    fit.weights.x0 = x0;
    fit.weights.h = h;
    fit.weights.order = order;
    fit.weights.effective_count = sys.idx.size();
    fit.weights.condition = sys.condition;

    std::vector<double> e0(dim, 0.0);
    e0[0] = 1.0;
    const std::vector<double> a = linalg::solve(sys.m, e0);
    for (std::size_t row = 0; row < sys.idx.size(); ++row) {
        double poly = a[dim - 1];
        for (int ss = dim - 2; ss >= 0; --ss) poly = poly * sys.u[row] + a[ss];
        fit.weights.weights[sys.idx[row]] = sys.kv[row] * poly;
    }
    return fit;
}

namespace {

// Leave-one-out fit at X_i for the common local-linear pilot, written out
// explicitly: the 2x2 normal equations have a closed-form solve and a
// closed-form 1-norm condition estimate, which keeps the O(n * window)
// pilot pass cheap. Returns false when the window is starved or degenerate.
bool loo_linear_at(std::span<const double> xs, std::span<const double> ys,
                   std::span<const std::size_t> ord, std::span<const double> sorted_x,
                   std::size_t skip, double b, const kernels::KernelSpec& kernel,
                   double* prediction, double* local_mean, std::size_t* local_count)
{
    const double x = xs[skip];
    const auto lo = std::lower_bound(sorted_x.begin(), sorted_x.end(), x - b);
    const auto hi = std::upper_bound(sorted_x.begin(), sorted_x.end(), x + b);

    double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
    double ysum = 0.0;
    std::size_t count = 0;
    for (auto it = lo; it != hi; ++it) {
        const std::size_t j = ord[static_cast<std::size_t>(it - sorted_x.begin())];
        if (j == skip) continue;
        const double u = (xs[j] - x) / b;
        const double kv = kernel(u);
        if (kv <= 0.0) continue;
        const double ku = kv * u;
        s0 += kv;
        s1 += ku;
        s2 += ku * u;
        t0 += kv * ys[j];
        t1 += ku * ys[j];
        ysum += ys[j];
        ++count;
    }
    *local_mean = count > 0 ? ysum / static_cast<double>(count) : 0.0;
    *local_count = count;
    if (count < 2) return false;

    const double det = s0 * s2 - s1 * s1;
    if (det == 0.0 || !std::isfinite(det)) return false;
    const double norm = std::max(std::abs(s0) + std::abs(s1), std::abs(s1) + std::abs(s2));
    const double inv_norm =
        std::max(std::abs(s2) + std::abs(s1), std::abs(s1) + std::abs(s0)) / std::abs(det);
    if (!(norm * inv_norm < kConditionLimit)) return false;

    *prediction = (s2 * t0 - s1 * t1) / det;
    return std::isfinite(*prediction);
}

// Generic-order variant used when the pilot degree is not 1.
bool loo_poly_at(std::span<const double> xs, std::span<const double> ys,
                 std::span<const std::size_t> ord, std::span<const double> sorted_x,
                 std::size_t skip, double b, int order, const kernels::KernelSpec& kernel,
                 double* prediction, double* local_mean, std::size_t* local_count)
{
    const double x = xs[skip];
    const auto lo = std::lower_bound(sorted_x.begin(), sorted_x.end(), x - b);
    const auto hi = std::upper_bound(sorted_x.begin(), sorted_x.end(), x + b);

    const int dim = order + 1;
    linalg::Matrix m(dim);
    std::vector<double> rhs(dim, 0.0);
    std::vector<double> r(dim);
    double ysum = 0.0;
    std::size_t count = 0;
    for (auto it = lo; it != hi; ++it) {
        const std::size_t j = ord[static_cast<std::size_t>(it - sorted_x.begin())];
        if (j == skip) continue;
        const double u = (xs[j] - x) / b;
        const double kv = kernel(u);
        if (kv <= 0.0) continue;
        r[0] = 1.0;
        for (int s = 1; s < dim; ++s) r[s] = r[s - 1] * u;
        for (int a = 0; a < dim; ++a) {
            for (int c = a; c < dim; ++c) m(a, c) += kv * r[a] * r[c];
            rhs[a] += kv * r[a] * ys[j];
        }
        ysum += ys[j];
        ++count;
    }
    *local_mean = count > 0 ? ysum / static_cast<double>(count) : 0.0;
    *local_count = count;
    if (count < static_cast<std::size_t>(dim)) return false;

    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < a; ++c) m(a, c) = m(c, a);
    if (!(linalg::condition_1norm(m) < kConditionLimit)) return false;
    try {
        *prediction = linalg::solve(m, rhs)[0];
    } catch (const NumericError&) {
        return false;
    }
    return std::isfinite(*prediction);
}

}  // namespace

std::vector<double> loo_pilot_at(const Sample& s, double b, int pilot_order,
                                 const kernels::KernelSpec& kernel,
                                 std::span<const std::size_t> indices)
{
    s.validate();
    check_order(pilot_order);
    if (!(b > 0.0) || !std::isfinite(b)) throw BadInput("pilot bandwidth must be positive");
    const std::size_t n = s.size();
    if (n < 2) throw BadInput("leave-one-out pilots need at least 2 observations");

    std::vector<std::size_t> ord(n);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t a, std::size_t c) { return s.xs[a] < s.xs[c]; });
    std::vector<double> sorted_x(n);
    for (std::size_t i = 0; i < n; ++i) sorted_x[i] = s.xs[ord[i]];
    const double total_y = std::accumulate(s.ys.begin(), s.ys.end(), 0.0);

    std::vector<double> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) {
        if (i >= n) throw BadInput("pilot index out of range");
        double pred = 0.0, local_mean = 0.0;
        std::size_t local_count = 0;
        const bool ok =
            pilot_order == 1
                ? loo_linear_at(s.xs, s.ys, ord, sorted_x, i, b, kernel, &pred,
                                &local_mean, &local_count)
                : loo_poly_at(s.xs, s.ys, ord, sorted_x, i, b, pilot_order, kernel,
                              &pred, &local_mean, &local_count);
        if (ok) {
            out.push_back(pred);
        } else if (local_count > 0) {
            out.push_back(local_mean);
        } else {
            out.push_back((total_y - s.ys[i]) / static_cast<double>(n - 1));
        }
    }
    return out;
}

std::vector<double> loo_pilot_predictions(const Sample& s, double b, int pilot_order,
                                          const kernels::KernelSpec& kernel)
{
    std::vector<std::size_t> all(s.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return loo_pilot_at(s, b, pilot_order, kernel, all);
}

}  // namespace ebci::lpreg
