#include "inertia/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "inertia/kernels.hpp"
#include "nnls_gram.hpp"

namespace inertia::est {

namespace {

// Node SSE route: direct residual accumulation when the row count is small
// enough that it beats the quadratic-form evaluation on accuracy for free.
constexpr std::size_t kDirectSseRows = 4096;

double node_sse(const DesignSystem& sys, const kernels::GramSystem& gs,
                std::span<const double> w) {
  if (sys.x.rows <= kDirectSseRows) {
    return kernels::residual_sse(sys.x, sys.y, w);
  }
  return detail::sse_quadform(gs, w);
}

int count_nonzero_penalized(const DesignSystem& sys, std::span<const double> w) {
  int n = 0;
  for (std::size_t k = 0; k < sys.n_penalized(); ++k) n += w[k] > 0.0;
  return n;
}

InertiaSolution make_solution(const DesignSystem& sys, std::vector<double> col_weights,
                              double lambda, bool exact) {
  InertiaSolution sol;
  sol.col_weights = std::move(col_weights);
  sol.lambda = lambda;
  for (std::size_t k = 0; k < sys.n_penalized(); ++k) {
    if (sol.col_weights[k] > 0.0) sol.support.push_back(k);
    for (const auto& id : sys.col_map[k]) sol.w[id] = sol.col_weights[k];
  }
  sol.w_dem = sys.has_demand_col ? sol.col_weights[sys.demand_col()] : 0.0;
  for (const auto& group : sys.col_map) {
    if (group.size() > 1) sol.groups.push_back(group);
  }

  const double sse = kernels::residual_sse(sys.x, sys.y, sol.col_weights);
  sol.objective = sse + lambda * double(sol.support.size());
  sol.diagnostics.n_nonzero = int(sol.support.size());
  sol.diagnostics.exact = exact;
  if (sys.x.rows > 0) {
    std::vector<double> pred(sys.x.rows);
    kernels::matvec(sys.x, sol.col_weights, pred);
    double abs_sum = 0.0;
    for (std::size_t t = 0; t < sys.x.rows; ++t) abs_sum += std::abs(sys.y[t] - pred[t]);
    sol.diagnostics.mae_gvas = abs_sum / double(sys.x.rows);
    sol.diagnostics.rmse_gvas = std::sqrt(sse / double(sys.x.rows));
  }
  return sol;
}

void check_finite(const DesignSystem& sys) {
  for (const double v : sys.x.data) {
    if (!std::isfinite(v)) throw std::invalid_argument("design matrix has non-finite entries");
  }
  for (const double v : sys.y) {
    if (!std::isfinite(v)) throw std::invalid_argument("target vector has non-finite entries");
  }
}

std::vector<std::uint8_t> all_allowed(std::size_t n) { return std::vector<std::uint8_t>(n, 1); }

// Restricted NNLS refit: penalized columns outside `mask` are forced to zero,
// the demand column is always allowed.
struct Refit {
  std::vector<double> w;
  double sse = 0.0;
  int nnz = 0;
  double objective = 0.0;
};

Refit refit_support(const DesignSystem& sys, const kernels::GramSystem& gs,
                    const std::vector<std::uint8_t>& mask, double lambda) {
  Refit r;
  r.w.assign(sys.n_cols(), 0.0);
  std::vector<std::uint8_t> allowed(sys.n_cols(), 0);
  for (std::size_t k = 0; k < sys.n_penalized(); ++k) allowed[k] = mask[k];
  if (sys.has_demand_col) allowed[sys.demand_col()] = 1;
  detail::nnls_gram(gs.gram, gs.xty, allowed, r.w);
  r.sse = node_sse(sys, gs, r.w);
  r.nnz = count_nonzero_penalized(sys, r.w);
  r.objective = r.sse + lambda * double(r.nnz);
  return r;
}

struct BnbState {
  const DesignSystem& sys;
  const kernels::GramSystem& gs;
  double lambda;
  std::vector<std::int8_t> state;  // 0 free, 1 forced-in, 2 forced-out
  int n_in = 0;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best_w;
  std::vector<double> w_node;
  std::vector<std::uint8_t> allowed;
};

void bnb_recurse(BnbState& st) {
  const std::size_t n_pen = st.sys.n_penalized();
  for (std::size_t k = 0; k < n_pen; ++k) st.allowed[k] = st.state[k] != 2;
  if (st.sys.has_demand_col) st.allowed[st.sys.demand_col()] = 1;

  detail::nnls_gram(st.gs.gram, st.gs.xty, st.allowed, st.w_node);
  const double sse = node_sse(st.sys, st.gs, st.w_node);
  const double bound = sse + st.lambda * double(st.n_in);
  if (bound >= st.best_obj) return;

  const int nnz = count_nonzero_penalized(st.sys, st.w_node);
  const double cand = sse + st.lambda * double(nnz);
  if (cand < st.best_obj) {
    st.best_obj = cand;
    st.best_w = st.w_node;
  }

  // branch on the free column with the largest relaxed weight
  std::size_t branch = n_pen;
  double wmax = 0.0;
  for (std::size_t k = 0; k < n_pen; ++k) {
    if (st.state[k] == 0 && st.w_node[k] > wmax) {
      wmax = st.w_node[k];
      branch = k;
    }
  }
  if (branch == n_pen) return;  // relaxation already decides every free column

  st.state[branch] = 1;
  ++st.n_in;
  bnb_recurse(st);
  --st.n_in;
  st.state[branch] = 2;
  bnb_recurse(st);
  st.state[branch] = 0;
}

InertiaSolution solve_l0_exact(const DesignSystem& sys, double lambda, int exact_limit) {
  if (sys.n_penalized() > std::size_t(exact_limit)) {
    throw SizeError("exact mode limited to " + std::to_string(exact_limit) +
                    " penalized columns (got " + std::to_string(sys.n_penalized()) +
                    "); use heuristic or auto mode");
  }
  const auto gs = kernels::gram(sys.x, sys.y);
  BnbState st{sys, gs, lambda, std::vector<std::int8_t>(sys.n_penalized(), 0), 0,
              std::numeric_limits<double>::infinity(), {}, std::vector<double>(sys.n_cols(), 0.0),
              std::vector<std::uint8_t>(sys.n_cols(), 0)};
  bnb_recurse(st);
  return make_solution(sys, std::move(st.best_w), lambda, /*exact=*/true);
}

}  // namespace

DesignSystem DesignSystem::raw(linalg::Matrix x, std::vector<double> y, bool has_demand_col) {
  DesignSystem sys;
  sys.x = std::move(x);
  sys.y = std::move(y);
  if (sys.x.rows != sys.y.size()) throw std::invalid_argument("raw system: row count mismatch");
  sys.has_demand_col = has_demand_col;
  const std::size_t n_pen = sys.x.cols - (has_demand_col ? 1 : 0);
  for (std::size_t k = 0; k < n_pen; ++k) {
    sys.col_map.push_back({"c" + std::to_string(k)});
  }
  sys.row_kind.assign(sys.x.rows, RowKind::market);
  return sys;
}

DesignSystem assemble(const ingest::IndicatorMatrix& ind, const ingest::AggregateSeries& series,
                      const ingest::ColinearityGroups& groups, bool use_tso_rows) {
  const std::size_t n_periods = ind.periods.size();
  if (series.points.size() != n_periods) {
    throw AlignmentError("indicator matrix and aggregate series disagree on period count");
  }
  for (std::size_t t = 0; t < n_periods; ++t) {
    if (series.points[t].period != ind.periods[t]) {
      throw AlignmentError("indicator matrix and aggregate series disagree on period order");
    }
  }
  if (groups.group_of.size() != ind.plants.size()) {
    throw AlignmentError("grouping does not cover the indicator plants");
  }

  const std::size_t n_groups = groups.groups.size();
  const std::size_t n_cols = n_groups + 1;

  // market rows: group coefficient = number of ON members, demand entry d_t
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  std::vector<RowKind> kinds;
  for (std::size_t t = 0; t < n_periods; ++t) {
    std::vector<double> row(n_cols, 0.0);
    bool any = false;
    for (std::size_t j = 0; j < ind.plants.size(); ++j) {
      if (ind.market_at(t, j)) {
        row[groups.group_of[j]] += 1.0;
        any = true;
      }
    }
    row[n_groups] = series.points[t].demand_gw;
    if (any || row[n_groups] != 0.0) {
      rows.push_back(std::move(row));
      y.push_back(series.points[t].market_gvas);
      kinds.push_back(RowKind::market);
    }
  }

  if (use_tso_rows) {
    for (std::size_t t = 0; t < n_periods; ++t) {
      std::vector<double> row(n_cols, 0.0);
      bool any = false;
      for (std::size_t j = 0; j < ind.plants.size(); ++j) {
        if (const auto v = ind.tso_at(t, j); v != 0) {
          row[groups.group_of[j]] += double(v);
          any = true;
        }
      }
      bool nonzero = false;
      for (std::size_t g = 0; g < n_groups; ++g) nonzero |= row[g] != 0.0;
      if (any && nonzero) {
        const auto& p = series.points[t];
        rows.push_back(std::move(row));
        y.push_back(std::max(0.0, p.outturn_gvas - p.market_gvas));
        kinds.push_back(RowKind::tso);
      }
    }
  }

  if (rows.empty()) throw AssemblyError("no usable rows: all coefficients are zero");

  DesignSystem sys;
  sys.x = linalg::Matrix(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), sys.x.data.begin() + r * n_cols);
  }
  sys.y = std::move(y);
  sys.row_kind = std::move(kinds);
  sys.has_demand_col = true;
  sys.col_map.reserve(n_groups);
  for (const auto& members : groups.groups) {
    std::vector<PlantId> ids;
    ids.reserve(members.size());
    for (const auto m : members) ids.push_back(ind.plants[m]);
    sys.col_map.push_back(std::move(ids));
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    bool all_zero = true;
    for (std::size_t r = 0; r < sys.x.rows && all_zero; ++r) {
      all_zero = sys.x(r, g) == 0.0;
    }
    if (all_zero) sys.degenerate_cols.push_back(g);
  }
  return sys;
}

InertiaSolution solve_nnls(const DesignSystem& sys) {
  if (sys.x.rows == 0) throw std::invalid_argument("solve_nnls: empty system");
  check_finite(sys);
  const auto gs = kernels::gram(sys.x, sys.y);
  std::vector<double> w(sys.n_cols(), 0.0);
  const auto allowed = all_allowed(sys.n_cols());
  detail::nnls_gram(gs.gram, gs.xty, allowed, w);
  return make_solution(sys, std::move(w), 0.0, /*exact=*/true);
}

InertiaSolution solve_l0_heuristic(const DesignSystem& sys, double lambda,
                                   HeuristicStages* stages) {
  check_finite(sys);
  const auto gs = kernels::gram(sys.x, sys.y);
  const std::size_t n_pen = sys.n_penalized();

  // stage 1: NNLS over everything, hard-thresholded at every support size
  std::vector<double> w_full(sys.n_cols(), 0.0);
  detail::nnls_gram(gs.gram, gs.xty, all_allowed(sys.n_cols()), w_full);

  std::vector<double> thresholds{0.0};
  for (std::size_t k = 0; k < n_pen; ++k) {
    if (w_full[k] > 0.0) thresholds.push_back(w_full[k]);
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<Refit> threshold_fits(thresholds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    std::vector<std::uint8_t> mask(n_pen, 0);
    for (std::size_t k = 0; k < n_pen; ++k) mask[k] = w_full[k] > thresholds[i];
    threshold_fits[i] = refit_support(sys, gs, mask, lambda);
  }
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (threshold_fits[i].objective < threshold_fits[best_i].objective) best_i = i;
  }
  Refit best = threshold_fits[best_i];
  std::vector<std::uint8_t> best_mask(n_pen, 0);
  for (std::size_t k = 0; k < n_pen; ++k) best_mask[k] = w_full[k] > thresholds[best_i];
  if (stages) stages->thresholded = best.objective;

  // stage 2: forward greedy from the empty support
  std::vector<std::uint8_t> mask(n_pen, 0);
  Refit cur = refit_support(sys, gs, mask, lambda);
  while (true) {
    std::vector<double> objs(n_pen, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < n_pen; ++k) {
      if (mask[k]) continue;
      auto trial = mask;
      trial[k] = 1;
      objs[k] = refit_support(sys, gs, trial, lambda).objective;
    }
    std::size_t pick = n_pen;
    double pick_obj = cur.objective;
    for (std::size_t k = 0; k < n_pen; ++k) {
      if (objs[k] < pick_obj) {
        pick_obj = objs[k];
        pick = k;
      }
    }
    if (pick == n_pen) break;
    mask[pick] = 1;
    cur = refit_support(sys, gs, mask, lambda);
  }
  if (cur.objective < best.objective) {
    best = cur;
    best_mask = mask;
  }
  if (stages) stages->greedy = best.objective;

  // stage 3: 1-swap local search (drop / add / swap), best improving move
  const std::size_t max_rounds = 4 * n_pen + 8;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::vector<std::vector<std::uint8_t>> moves;
    for (std::size_t k = 0; k < n_pen; ++k) {
      if (!best_mask[k]) continue;
      auto m = best_mask;
      m[k] = 0;
      moves.push_back(std::move(m));
    }
    for (std::size_t l = 0; l < n_pen; ++l) {
      if (best_mask[l]) continue;
      auto m = best_mask;
      m[l] = 1;
      moves.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < n_pen; ++k) {
      if (!best_mask[k]) continue;
      for (std::size_t l = 0; l < n_pen; ++l) {
        if (best_mask[l]) continue;
        auto m = best_mask;
        m[k] = 0;
        m[l] = 1;
        moves.push_back(std::move(m));
      }
    }
    if (moves.empty()) break;
    std::vector<Refit> fits(moves.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < moves.size(); ++i) {
      fits[i] = refit_support(sys, gs, moves[i], lambda);
    }
    std::size_t pick = moves.size();
    double pick_obj = best.objective;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      if (fits[i].objective < pick_obj) {
        pick_obj = fits[i].objective;
        pick = i;
      }
    }
    if (pick == moves.size()) break;
    best = fits[pick];
    best_mask = moves[pick];
  }
  if (stages) stages->local_search = best.objective;

  return make_solution(sys, std::move(best.w), lambda, /*exact=*/false);
}

InertiaSolution solve_l0(const DesignSystem& sys, double lambda, L0Mode mode, int exact_limit) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and non-negative");
  }
  if (sys.x.rows == 0) throw std::invalid_argument("solve_l0: empty system");
  check_finite(sys);
  if (lambda == 0.0) return solve_nnls(sys);

  switch (mode) {
    case L0Mode::exact:
      return solve_l0_exact(sys, lambda, exact_limit);
    case L0Mode::heuristic:
      return solve_l0_heuristic(sys, lambda);
    case L0Mode::auto_select:
      if (sys.n_penalized() <= std::size_t(exact_limit)) {
        return solve_l0_exact(sys, lambda, exact_limit);
      }
      return solve_l0_heuristic(sys, lambda);
  }
  throw std::logic_error("unreachable");
}

InertiaSolution brute_force_oracle(const DesignSystem& sys, double lambda) {
  const std::size_t n = sys.n_penalized();
  if (n > kOracleLimit) {
    throw SizeError("brute_force_oracle limited to " + std::to_string(kOracleLimit) +
                    " penalized columns");
  }
  check_finite(sys);
  const auto gs = kernels::gram(sys.x, sys.y);
  const std::size_t n_masks = std::size_t(1) << n;

  std::vector<double> objs(n_masks);
  std::vector<std::vector<double>> ws(n_masks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t m = 0; m < n_masks; ++m) {
    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t k = 0; k < n; ++k) mask[k] = (m >> k) & 1u;
    auto fit = refit_support(sys, gs, mask, 0.0);
    objs[m] = fit.sse + lambda * double(std::popcount(m));
    ws[m] = std::move(fit.w);
  }
  std::size_t best = 0;
  for (std::size_t m = 1; m < n_masks; ++m) {
    if (objs[m] < objs[best]) best = m;
  }
  return make_solution(sys, std::move(ws[best]), lambda, /*exact=*/true);
}

InertiaSolution fit(const ingest::IndicatorMatrix& ind, const ingest::AggregateSeries& series,
                    const ingest::ColinearityGroups& groups, double lambda, L0Mode mode,
                    bool use_tso_rows) {
  const auto sys = assemble(ind, series, groups, use_tso_rows);
  return solve_l0(sys, lambda, mode);
}

namespace {

ingest::IndicatorMatrix slice_indicators(const ingest::IndicatorMatrix& ind, std::size_t lo,
                                         std::size_t hi) {
  ingest::IndicatorMatrix out;
  out.periods.assign(ind.periods.begin() + lo, ind.periods.begin() + hi);
  out.plants = ind.plants;
  const std::size_t n = ind.plants.size();
  out.market.assign(ind.market.begin() + lo * n, ind.market.begin() + hi * n);
  out.tso.assign(ind.tso.begin() + lo * n, ind.tso.begin() + hi * n);
  return out;
}

ingest::AggregateSeries slice_series(const ingest::AggregateSeries& series, std::size_t lo,
                                     std::size_t hi) {
  ingest::AggregateSeries out;
  out.points.assign(series.points.begin() + lo, series.points.begin() + hi);
  return out;
}

}  // namespace

LambdaChoice select_lambda(const ingest::IndicatorMatrix& ind,
                           const ingest::AggregateSeries& series,
                           const ingest::ColinearityGroups& groups, std::span<const double> grid,
                           double validation_split, L0Mode mode, bool use_tso_rows) {
  if (grid.empty()) throw std::invalid_argument("lambda grid must be non-empty");
  if (!(validation_split > 0.0) || !(validation_split < 1.0)) {
    throw std::invalid_argument("validation_split must lie in (0, 1)");
  }
  const std::size_t n = ind.periods.size();
  std::size_t n_val = std::size_t(std::floor(validation_split * double(n)));
  n_val = std::clamp<std::size_t>(n_val, n >= 2 ? 1 : 0, n >= 2 ? n - 1 : 0);
  const std::size_t n_train = n - n_val;

  const auto train_ind = slice_indicators(ind, 0, n_train);
  const auto train_series = slice_series(series, 0, n_train);

  LambdaChoice choice;
  double best_mae = std::numeric_limits<double>::infinity();
  for (const double lambda : grid) {
    const auto sol = fit(train_ind, train_series, groups, lambda, mode, use_tso_rows);
    // validation MAE of the predicted market aggregate
    double abs_sum = 0.0;
    for (std::size_t t = n_train; t < n; ++t) {
      double pred = sol.w_dem * series.points[t].demand_gw;
      for (std::size_t j = 0; j < ind.plants.size(); ++j) {
        if (ind.market_at(t, j)) {
          pred += sol.col_weights[groups.group_of[j]];
        }
      }
      abs_sum += std::abs(series.points[t].market_gvas - pred);
    }
    const double mae = n_val > 0 ? abs_sum / double(n_val) : sol.diagnostics.mae_gvas;
    choice.grid_mae.emplace_back(lambda, mae);
    best_mae = std::min(best_mae, mae);
  }

  // near-ties resolve towards the larger (sparser) lambda
  const double tie_tol = std::max(1e-12, 1e-9 * best_mae);
  double picked = -std::numeric_limits<double>::infinity();
  for (const auto& [lambda, mae] : choice.grid_mae) {
    if (mae <= best_mae + tie_tol && lambda > picked) picked = lambda;
  }
  choice.lambda = picked;
  choice.solution = fit(ind, series, groups, picked, mode, use_tso_rows);
  return choice;
}

}  // namespace inertia::est
