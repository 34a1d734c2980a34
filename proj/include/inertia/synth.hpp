#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "inertia/domain.hpp"
#include "inertia/estimator.hpp"
#include "inertia/ingest.hpp"

namespace inertia::synth {

// Deterministic across platforms: mt19937_64 (fully specified by the
// standard) with hand-coded uniform and normal transforms, so no
// implementation-defined distribution is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1) with 53 random bits
    return double(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mean, double sigma);  // Box-Muller, cosine branch
  std::uint64_t below(std::uint64_t n);      // uniform in [0, n)

 private:
  std::mt19937_64 engine_;
};

struct ScenarioConfig {
  int n_plants = 12;
  double zero_fraction = 0.25;
  int n_periods = 960;
  double noise_sigma_gvas = 0.0;
  double w_dem_true = 0.8;  // GVAs per GW
  double duty_cycle = 0.6;
  double tso_action_rate = 0.0;  // per-period probability of one switch-on action
  int colinear_pairs = 0;        // identical-schedule same-fuel pairs with equal w_true
  std::uint64_t seed = 1;
  Date start_date{2020, 1, 1};
};

struct Scenario {
  ScenarioConfig config;
  std::vector<Plant> plants;  // true_inertia_gvas set on every plant
  ingest::IndicatorMatrix indicators;
  ingest::AggregateSeries series;
  ingest::ColinearityGroups injected_groups;  // tied pairs, singletons elsewhere
  std::vector<double> dispatch_level_mw;      // per plant, level when ON
};

Scenario generate(const ScenarioConfig& config);

struct RecoveryReport {
  std::vector<std::pair<PlantId, double>> abs_errors;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  int false_positive_nonzeros = 0;  // true zero, recovered > 0
  int false_negative_zeros = 0;     // true nonzero, recovered == 0
};

RecoveryReport recovery_report(const est::InertiaSolution& sol, const Scenario& scenario);

// Writes the ingest fixture schemas plus ground_truth.csv into `dir`.
void export_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace inertia::synth
