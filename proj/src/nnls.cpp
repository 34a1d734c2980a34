#include "nnls_gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "inertia/estimator.hpp"

namespace inertia::est {

namespace detail {

void nnls_gram(const linalg::Matrix& gram, std::span<const double> xty,
               std::span<const std::uint8_t> allowed, std::span<double> w) {
  const std::size_t n = xty.size();
  if (gram.rows != n || gram.cols != n || allowed.size() != n || w.size() != n) {
    throw std::invalid_argument("nnls_gram: dimension mismatch");
  }
  std::fill(w.begin(), w.end(), 0.0);

  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (allowed[k]) scale = std::max(scale, std::abs(xty[k]));
  }
  if (scale == 0.0) return;
  const double tol = 1e-10 * scale;

  std::vector<std::size_t> passive;
  std::vector<std::uint8_t> in_passive(n, 0);
  std::vector<std::uint8_t> rejected(n, 0);  // singular against current passive set
  std::vector<double> grad(xty.begin(), xty.end());

  linalg::Matrix sub;
  std::vector<double> rhs, z;

  const std::size_t max_outer = 12 * n + 16;
  for (std::size_t outer = 0; outer < max_outer; ++outer) {
    // candidate with the largest gradient, lowest index on ties
    std::size_t cand = n;
    double best = tol;
    for (std::size_t k = 0; k < n; ++k) {
      if (allowed[k] && !in_passive[k] && !rejected[k] && grad[k] > best) {
        best = grad[k];
        cand = k;
      }
    }
    if (cand == n) break;  // KKT holds on the allowed set

    passive.push_back(cand);
    in_passive[cand] = 1;

    bool shrunk = false;
    while (true) {
      const std::size_t m = passive.size();
      sub = linalg::Matrix(m, m);
      rhs.assign(m, 0.0);
      z.assign(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t jj = 0; jj < m; ++jj) sub(i, jj) = gram(passive[i], passive[jj]);
        rhs[i] = xty[passive[i]];
      }
      if (!linalg::cholesky_solve(sub, rhs, z)) {
        // most recent column is linearly dependent on the rest
        const std::size_t k = passive.back();
        passive.pop_back();
        in_passive[k] = 0;
        rejected[k] = 1;
        break;
      }

      bool all_positive = true;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(z[i] > 0.0)) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        for (std::size_t i = 0; i < m; ++i) w[passive[i]] = z[i];
        break;
      }

      // step toward z until the first passive weight hits zero
      double alpha = std::numeric_limits<double>::infinity();
      std::size_t hit = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (z[i] <= 0.0) {
          const double wi = w[passive[i]];
          const double t = wi / (wi - z[i]);
          if (t < alpha) {
            alpha = t;
            hit = i;
          }
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        w[passive[i]] += alpha * (z[i] - w[passive[i]]);
      }
      std::vector<std::size_t> kept;
      kept.reserve(m);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = passive[i];
        if (i == hit || w[k] <= 0.0) {
          w[k] = 0.0;
          in_passive[k] = 0;
          shrunk = true;
        } else {
          kept.push_back(k);
        }
      }
      passive = std::move(kept);
    }

    if (shrunk) std::fill(rejected.begin(), rejected.end(), 0);

    // gradient of -1/2 ||y - Xw||^2 restricted to the solved weights
    for (std::size_t k = 0; k < n; ++k) {
      if (!allowed[k]) continue;
      double g = xty[k];
      for (const std::size_t p : passive) g -= gram(k, p) * w[p];
      grad[k] = g;
    }
  }
}

double sse_quadform(const kernels::GramSystem& gs, std::span<const double> w) {
  const std::size_t n = w.size();
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += gs.gram(i, j) * w[j];
    quad += w[i] * (row - 2.0 * gs.xty[i]);
  }
  return std::max(0.0, gs.yty + quad);
}

}  // namespace detail

double kkt_max_violation(const DesignSystem& sys, std::span<const double> col_weights) {
  const auto gs = kernels::gram(sys.x, sys.y);
  const std::size_t n = sys.n_cols();
  if (col_weights.size() != n) throw std::invalid_argument("kkt_max_violation: size mismatch");
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(gs.xty[k]));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double g = 0.0;  // gradient of ||y - Xw||^2 is 2 (Gw - c)
    for (std::size_t j = 0; j < n; ++j) g += gs.gram(k, j) * col_weights[j];
    g = 2.0 * (g - gs.xty[k]);
    const double violation = col_weights[k] > 0.0 ? std::abs(g) : std::max(0.0, -g);
    worst = std::max(worst, violation / scale);
  }
  return worst;
}

}  // namespace inertia::est
