#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace inertia::linalg {

// Dense row-major matrix. Small enough for this problem class that no
// external linear algebra package is needed.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
};

// Solves A x = b for symmetric positive definite A via Cholesky.
// Returns false when a pivot falls below rel_pivot_tol times the original
// diagonal entry (rank deficiency within tolerance); x is untouched then.
bool cholesky_solve(const Matrix& a, std::span<const double> b, std::span<double> x,
                    double rel_pivot_tol = 1e-13);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace inertia::linalg
