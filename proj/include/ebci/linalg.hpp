#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ebci::linalg {

// Dense row-major square matrix sized for local polynomial design systems:
// (S+1) x (S+1) with small S. Deliberately not a general matrix library.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    static Matrix identity(std::size_t n);

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Solve M x = b by LU with partial pivoting. Throws NumericError on an
// exactly singular pivot; conditioning is the caller's concern (see
// condition_1norm).
std::vector<double> solve(const Matrix& m, std::span<const double> b);

// ||M||_1 * ||M^-1||_1 with the inverse obtained column-by-column from the
// same LU solve. Returns +inf when the factorization hits a zero pivot.
double condition_1norm(const Matrix& m);

// Cholesky feasibility check: true iff M (assumed symmetric) is numerically
// positive definite.
bool is_positive_definite(const Matrix& m);

}  // namespace ebci::linalg
