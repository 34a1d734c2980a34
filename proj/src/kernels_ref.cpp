#include <stdexcept>

#include "inertia/kernels.hpp"

// Textbook single-threaded versions of the kernels. The unit tests compare
// them against the parallel implementations and the benchmark target measures
// the speedup.

namespace inertia::kernels::ref {

GramSystem gram(const linalg::Matrix& x, std::span<const double> y) {
  if (y.size() != x.rows) throw std::invalid_argument("gram: y size mismatch");
  const std::size_t n = x.cols;
  GramSystem out;
  out.gram = linalg::Matrix(n, n);
  out.xty.assign(n, 0.0);
  for (std::size_t t = 0; t < x.rows; ++t) {
    const auto row = x.row(t);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        out.gram(j, k) += row[j] * row[k];
      }
      out.xty[j] += row[j] * y[t];
    }
    out.yty += y[t] * y[t];
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) out.gram(j, k) = out.gram(k, j);
  }
  return out;
}

double residual_sse(const linalg::Matrix& x, std::span<const double> y,
                    std::span<const double> w) {
  if (y.size() != x.rows || w.size() != x.cols) {
    throw std::invalid_argument("residual_sse: dimension mismatch");
  }
  double sse = 0.0;
  for (std::size_t t = 0; t < x.rows; ++t) {
    const double r = y[t] - linalg::dot(x.row(t), w);
    sse += r * r;
  }
  return sse;
}

void matvec(const linalg::Matrix& x, std::span<const double> w, std::span<double> out) {
  if (w.size() != x.cols || out.size() != x.rows) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  for (std::size_t t = 0; t < x.rows; ++t) {
    out[t] = linalg::dot(x.row(t), w);
  }
}

std::vector<std::int64_t> pairwise_agreement(const std::int8_t* cols, std::size_t n_rows,
                                             std::size_t n_cols) {
  std::vector<std::int64_t> out(n_cols * n_cols, 0);
  for (std::size_t i = 0; i < n_cols; ++i) {
    for (std::size_t k = i; k < n_cols; ++k) {
      std::int64_t agree = 0;
      for (std::size_t t = 0; t < n_rows; ++t) {
        agree += cols[t * n_cols + i] == cols[t * n_cols + k];
      }
      out[i * n_cols + k] = agree;
      out[k * n_cols + i] = agree;
    }
  }
  return out;
}

}  // namespace inertia::kernels::ref
