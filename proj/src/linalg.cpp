#include "ebci/linalg.hpp"

#include <cmath>
#include <limits>

#include "ebci/errors.hpp"

namespace ebci::linalg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> perm;
    bool singular = false;
};

Lu factor(const Matrix& m) {
    const std::size_t n = m.size();
    Lu f{m, std::vector<std::size_t>(n), false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) { f.singular = true; return f; }
        if (piv != k) {
            std::swap(f.perm[piv], f.perm[k]);
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(k, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mult = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = mult;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= mult * f.lu(k, j);
        }
    }
    return f;
}

std::vector<double> solve_factored(const Lu& f, std::span<const double> b) {
    const std::size_t n = f.lu.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= f.lu(ii, j) * x[j];
        x[ii] /= f.lu(ii, ii);
    }
    return x;
}

double norm_1(const Matrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) col += std::fabs(m(i, j));
        if (col > best) best = col;
    }
    return best;
}

}  // namespace

std::vector<double> solve(const Matrix& m, std::span<const double> b) {
    if (m.size() == 0 || b.size() != m.size())
        throw BadInput("solve: dimension mismatch");
    const Lu f = factor(m);
    if (f.singular) throw NumericError("solve: singular matrix");
    return solve_factored(f, b);
}

double condition_1norm(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 0.0;
    const Lu f = factor(m);
    if (f.singular) return std::numeric_limits<double>::infinity();

    // ||M^-1||_1 exactly, one solve per unit vector; n is tiny here.
    double inv_norm = 0.0;
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = solve_factored(f, e);
        e[j] = 0.0;
        double sum = 0.0;
        for (double v : col) sum += std::fabs(v);
        if (sum > inv_norm) inv_norm = sum;
    }
    return norm_1(m) * inv_norm;
}

bool is_positive_definite(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix c = m;
    for (std::size_t k = 0; k < n; ++k) {
        double d = c(k, k);
        for (std::size_t j = 0; j < k; ++j) d -= c(k, j) * c(k, j);
        if (!(d > 0.0)) return false;
        const double r = std::sqrt(d);
        c(k, k) = r;
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = c(i, k);
            for (std::size_t j = 0; j < k; ++j) v -= c(i, j) * c(k, j);
            c(i, k) = v / r;
        }
    }
    return true;
}

}  // namespace ebci::linalg
