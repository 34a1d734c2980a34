#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "inertia/domain.hpp"
#include "inertia/ingest.hpp"
#include "inertia/linalg.hpp"

namespace inertia::est {

enum class RowKind : std::uint8_t { market, tso };

// Stacked regression system. Penalized columns (one per plant group) come
// first; when has_demand_col is set the last column is the unpenalized
// demand column.
struct DesignSystem {
  linalg::Matrix x;
  std::vector<double> y;  // GVAs
  std::vector<RowKind> row_kind;
  std::vector<std::vector<PlantId>> col_map;  // group column -> member plants
  bool has_demand_col = false;
  std::vector<std::size_t> degenerate_cols;  // all-zero penalized columns

  std::size_t n_penalized() const { return col_map.size(); }
  std::size_t n_cols() const { return col_map.size() + (has_demand_col ? 1 : 0); }
  std::size_t demand_col() const { return col_map.size(); }

  // Raw system for solver-level use; columns are named c0, c1, ...
  static DesignSystem raw(linalg::Matrix x, std::vector<double> y, bool has_demand_col = false);
};

struct SolveDiagnostics {
  double rmse_gvas = 0.0;
  double mae_gvas = 0.0;
  int n_nonzero = 0;   // penalized columns with w > 0
  bool exact = false;  // solution carries a global-optimality certificate
};

struct InertiaSolution {
  std::map<PlantId, double> w;          // per-plant GVAs (group weight expanded)
  double w_dem = 0.0;                   // GVAs per GW
  std::vector<std::size_t> support;     // penalized columns with w > 0
  double lambda = 0.0;
  double objective = 0.0;               // SSE + lambda * |support|
  SolveDiagnostics diagnostics;
  std::vector<double> col_weights;      // raw column weights incl. demand col
  std::vector<std::vector<PlantId>> groups;  // multi-member groups used in the fit
};

enum class L0Mode { exact, heuristic, auto_select };

inline constexpr int kExactLimit = 20;   // penalized columns for branch-and-bound
inline constexpr int kOracleLimit = 12;  // penalized columns for full enumeration

// One market row per series period plus, when use_tso_rows is set, one TSO
// row per period with a nonzero TSO indicator. The TSO row target is
// max(outturn - market, 0).
DesignSystem assemble(const ingest::IndicatorMatrix& ind, const ingest::AggregateSeries& series,
                      const ingest::ColinearityGroups& groups, bool use_tso_rows);

// Global minimizer of ||y - X w||^2 subject to w >= 0 (Lawson-Hanson active
// set on the normal equations).
InertiaSolution solve_nnls(const DesignSystem& sys);

// Minimizes ||y - X w||^2 + lambda * |{penalized k : w_k > 0}| over w >= 0.
// Exact mode certifies the global optimum by branch-and-bound over supports;
// heuristic mode is thresholded-NNLS / forward-greedy / 1-swap local search.
InertiaSolution solve_l0(const DesignSystem& sys, double lambda, L0Mode mode,
                         int exact_limit = kExactLimit);

// Objectives after each heuristic stage; later stages never regress.
struct HeuristicStages {
  double thresholded = 0.0;
  double greedy = 0.0;
  double local_search = 0.0;
};
InertiaSolution solve_l0_heuristic(const DesignSystem& sys, double lambda,
                                   HeuristicStages* stages = nullptr);

// Full enumeration of all supports over the penalized columns; the
// verification oracle for solve_l0. Throws SizeError above kOracleLimit.
InertiaSolution brute_force_oracle(const DesignSystem& sys, double lambda);

// Largest scaled KKT residual of w for min ||y - Xw||^2 s.t. w >= 0:
// violation of |grad_k| <= tol for w_k > 0 and grad_k >= -tol for w_k = 0,
// divided by ||X^T y||_inf. Zero means exact stationarity.
double kkt_max_violation(const DesignSystem& sys, std::span<const double> col_weights);

InertiaSolution fit(const ingest::IndicatorMatrix& ind, const ingest::AggregateSeries& series,
                    const ingest::ColinearityGroups& groups, double lambda, L0Mode mode,
                    bool use_tso_rows = true);

struct LambdaChoice {
  double lambda = 0.0;
  InertiaSolution solution;                       // refit on the full data
  std::vector<std::pair<double, double>> grid_mae;  // (lambda, validation MAE)
};

// Chronological split; fits each grid point on the training head, scores the
// validation MAE of the predicted market aggregate, and picks the smallest
// MAE with near-ties (1e-9 relative) resolved towards the larger lambda.
LambdaChoice select_lambda(const ingest::IndicatorMatrix& ind,
                           const ingest::AggregateSeries& series,
                           const ingest::ColinearityGroups& groups, std::span<const double> grid,
                           double validation_split = 0.2, L0Mode mode = L0Mode::auto_select,
                           bool use_tso_rows = true);

inline constexpr double kDefaultLambdaGrid[] = {0.0, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0};

}  // namespace inertia::est
