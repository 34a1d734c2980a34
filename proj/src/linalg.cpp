#include "inertia/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace inertia::linalg {

bool cholesky_solve(const Matrix& a, std::span<const double> b, std::span<double> x,
                    double rel_pivot_tol) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n || x.size() != n) {
    throw std::invalid_argument("cholesky_solve: dimension mismatch");
  }
  if (n == 0) return true;

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > rel_pivot_tol * std::abs(a(j, j))) || !std::isfinite(d)) {
      return false;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }

  // forward substitution L z = b
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
    z[i] = s / l(i, i);
  }
  // back substitution L^T x = z
  for (std::size_t ii = n; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace inertia::linalg
