#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inertia/domain.hpp"
#include "inertia/estimator.hpp"
#include "inertia/ingest.hpp"

namespace inertia::forecast {

inline constexpr double kDefaultTriggerGvas = 140.0;

struct ForecastPoint {
  SettlementPeriod period;
  double predicted_gvas = 0.0;
  std::optional<double> actual_gvas;
  bool below_trigger = false;
};

struct ForecastSeries {
  std::vector<ForecastPoint> points;
  double trigger_gvas = kDefaultTriggerGvas;
  std::vector<std::string> warnings;  // indicator plants absent from the model
};

// predicted_t = w_dem * d_t + sum_j w_j * market_{j,t}. Plants in the
// indicator matrix but not in the solution count as zero inertia, with a
// warning per plant.
ForecastSeries predict(const est::InertiaSolution& sol, const ingest::IndicatorMatrix& ind,
                       std::span<const double> demand_gw,
                       double trigger_gvas = kDefaultTriggerGvas);

// Joins actual aggregates onto the series by period; periods without a match
// keep an empty actual.
void attach_actuals(ForecastSeries& series, std::span<const ingest::PeriodValue> actuals);

struct EvalReport {
  double mae_gvas = 0.0;
  double mape = 0.0;  // fraction, not percent
  std::size_t n_periods = 0;
  SettlementPeriod worst_period;
  double worst_error_gvas = 0.0;
  std::size_t skipped_zero_actual = 0;  // periods left out of the MAPE mean
};

// Errors over the periods that carry actuals; throws AlignmentError when
// there are none.
EvalReport evaluate(const ForecastSeries& series);

// Periods with predicted strictly below the trigger, ascending by time.
std::vector<SettlementPeriod> detect_low(const ForecastSeries& series,
                                         double trigger_gvas = kDefaultTriggerGvas);

// date,period,predicted_gvas,actual_gvas,below_trigger ('1'/'0'; actual empty
// when unknown)
void write_forecast_csv(const std::filesystem::path& path, const ForecastSeries& series);

std::string eval_to_json(const EvalReport& report);

}  // namespace inertia::forecast
