#include "inertia/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace inertia::kernels {

namespace {

// Rows per reduction block. Block partials are summed in block order, so the
// result does not depend on how blocks are assigned to threads.
constexpr std::size_t kBlockRows = 4096;

}  // namespace

GramSystem gram(const linalg::Matrix& x, std::span<const double> y) {
  if (y.size() != x.rows) throw std::invalid_argument("gram: y size mismatch");
  const std::size_t n = x.cols;
  const std::size_t rows = x.rows;
  GramSystem out;
  out.gram = linalg::Matrix(n, n);
  out.xty.assign(n, 0.0);

  // One independent serial dot product per (j, k) pair; parallel over pairs.
  const std::size_t n_pairs = n * (n + 1) / 2;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < n_pairs; ++p) {
    // unrank p -> (j, k), j <= k, pairs ordered (0,0),(0,1)..(0,n-1),(1,1)..
    std::size_t j = 0;
    std::size_t offset = p;
    while (offset >= n - j) {
      offset -= n - j;
      ++j;
    }
    const std::size_t k = j + offset;
    double s = 0.0;
    const double* col_base = x.data.data();
    for (std::size_t t = 0; t < rows; ++t) {
      s += col_base[t * n + j] * col_base[t * n + k];
    }
    out.gram(j, k) = s;
    out.gram(k, j) = s;
  }

#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t t = 0; t < rows; ++t) {
      s += x.data[t * n + j] * y[t];
    }
    out.xty[j] = s;
  }

  // y^T y over fixed blocks, partials combined in block order.
  const std::size_t n_blocks = rows == 0 ? 0 : (rows + kBlockRows - 1) / kBlockRows;
  std::vector<double> partial(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t lo = b * kBlockRows;
    const std::size_t hi = std::min(rows, lo + kBlockRows);
    double s = 0.0;
    for (std::size_t t = lo; t < hi; ++t) s += y[t] * y[t];
    partial[b] = s;
  }
  for (const double s : partial) out.yty += s;
  return out;
}

double residual_sse(const linalg::Matrix& x, std::span<const double> y,
                    std::span<const double> w) {
  if (y.size() != x.rows || w.size() != x.cols) {
    throw std::invalid_argument("residual_sse: dimension mismatch");
  }
  const std::size_t rows = x.rows;
  const std::size_t n = x.cols;
  const std::size_t n_blocks = rows == 0 ? 0 : (rows + kBlockRows - 1) / kBlockRows;
  std::vector<double> partial(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t lo = b * kBlockRows;
    const std::size_t hi = std::min(rows, lo + kBlockRows);
    double s = 0.0;
    for (std::size_t t = lo; t < hi; ++t) {
      double pred = 0.0;
      for (std::size_t j = 0; j < n; ++j) pred += x.data[t * n + j] * w[j];
      const double r = y[t] - pred;
      s += r * r;
    }
    partial[b] = s;
  }
  double sse = 0.0;
  for (const double s : partial) sse += s;
  return sse;
}

void matvec(const linalg::Matrix& x, std::span<const double> w, std::span<double> out) {
  if (w.size() != x.cols || out.size() != x.rows) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  const std::size_t n = x.cols;
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < x.rows; ++t) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x.data[t * n + j] * w[j];
    out[t] = s;
  }
}

std::vector<std::int64_t> pairwise_agreement(const std::int8_t* cols, std::size_t n_rows,
                                             std::size_t n_cols) {
  std::vector<std::int64_t> out(n_cols * n_cols, 0);
  const std::size_t n_pairs = n_cols * (n_cols + 1) / 2;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < n_pairs; ++p) {
    std::size_t i = 0;
    std::size_t offset = p;
    while (offset >= n_cols - i) {
      offset -= n_cols - i;
      ++i;
    }
    const std::size_t k = i + offset;
    std::int64_t agree = 0;
    for (std::size_t t = 0; t < n_rows; ++t) {
      agree += cols[t * n_cols + i] == cols[t * n_cols + k];
    }
    out[i * n_cols + k] = agree;
    out[k * n_cols + i] = agree;
  }
  return out;
}

}  // namespace inertia::kernels
