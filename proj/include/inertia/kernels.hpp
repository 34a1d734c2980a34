#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "inertia/linalg.hpp"

namespace inertia::kernels {

// OpenMP kernels for the row-dimension heavy loops. Every kernel is bitwise
// deterministic for any thread count: reductions run over fixed-size row
// blocks whose partial sums are combined in block-index order, and per-entry
// dot products are computed serially over rows.
//
// Naive single-threaded reference implementations live in kernels::ref and
// are kept for the unit tests and the benchmark target.

struct GramSystem {
  linalg::Matrix gram;       // X^T X
  std::vector<double> xty;   // X^T y
  double yty = 0.0;          // y^T y
};

GramSystem gram(const linalg::Matrix& x, std::span<const double> y);

// ||y - X w||^2 by direct residual accumulation.
double residual_sse(const linalg::Matrix& x, std::span<const double> y,
                    std::span<const double> w);

// out = X w
void matvec(const linalg::Matrix& x, std::span<const double> w, std::span<double> out);

// Number of rows on which columns i and k carry the same value, for every
// unordered pair. `cols` is row-major n_rows x n_cols. Entry (i, k) with
// i <= k lives at i * n_cols + k of the returned buffer.
std::vector<std::int64_t> pairwise_agreement(const std::int8_t* cols, std::size_t n_rows,
                                             std::size_t n_cols);

namespace ref {

GramSystem gram(const linalg::Matrix& x, std::span<const double> y);
double residual_sse(const linalg::Matrix& x, std::span<const double> y,
                    std::span<const double> w);
void matvec(const linalg::Matrix& x, std::span<const double> w, std::span<double> out);
std::vector<std::int64_t> pairwise_agreement(const std::int8_t* cols, std::size_t n_rows,
                                             std::size_t n_cols);

}  // namespace ref

}  // namespace inertia::kernels
