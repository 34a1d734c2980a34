#include "inertia/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "inertia/csv.hpp"

namespace inertia::forecast {

ForecastSeries predict(const est::InertiaSolution& sol, const ingest::IndicatorMatrix& ind,
                       std::span<const double> demand_gw, double trigger_gvas) {
  if (demand_gw.size() != ind.periods.size()) {
    throw AlignmentError("demand series and indicator matrix disagree on period count");
  }

  // column weights in plant order; unknown plants forecast as zero inertia
  std::vector<double> w(ind.plants.size(), 0.0);
  ForecastSeries series;
  series.trigger_gvas = trigger_gvas;
  for (std::size_t j = 0; j < ind.plants.size(); ++j) {
    const auto it = sol.w.find(ind.plants[j]);
    if (it == sol.w.end()) {
      series.warnings.push_back("plant " + ind.plants[j] +
                                " missing from the model, assuming zero inertia");
    } else {
      w[j] = it->second;
    }
  }

  series.points.reserve(ind.periods.size());
  for (std::size_t t = 0; t < ind.periods.size(); ++t) {
    double pred = sol.w_dem * demand_gw[t];
    for (std::size_t j = 0; j < ind.plants.size(); ++j) {
      if (ind.market_at(t, j)) pred += w[j];
    }
    ForecastPoint point;
    point.period = ind.periods[t];
    point.predicted_gvas = pred;
    point.below_trigger = pred < trigger_gvas;
    series.points.push_back(point);
  }
  return series;
}

void attach_actuals(ForecastSeries& series, std::span<const ingest::PeriodValue> actuals) {
  std::map<SettlementPeriod, double> by_period;
  for (const auto& a : actuals) by_period[a.period] = a.value;
  for (auto& point : series.points) {
    if (const auto it = by_period.find(point.period); it != by_period.end()) {
      point.actual_gvas = it->second;
    }
  }
}

EvalReport evaluate(const ForecastSeries& series) {
  EvalReport report;
  double abs_sum = 0.0;
  double pct_sum = 0.0;
  std::size_t pct_n = 0;
  for (const auto& point : series.points) {
    if (!point.actual_gvas) continue;
    const double err = point.predicted_gvas - *point.actual_gvas;
    abs_sum += std::abs(err);
    if (*point.actual_gvas > 0.0) {
      pct_sum += std::abs(err) / *point.actual_gvas;
      ++pct_n;
    } else {
      ++report.skipped_zero_actual;
    }
    if (report.n_periods == 0 || std::abs(err) > std::abs(report.worst_error_gvas)) {
      report.worst_period = point.period;
      report.worst_error_gvas = err;
    }
    ++report.n_periods;
  }
  if (report.n_periods == 0) {
    throw AlignmentError("no periods carry actual aggregates to evaluate against");
  }
  report.mae_gvas = abs_sum / double(report.n_periods);
  report.mape = pct_n > 0 ? pct_sum / double(pct_n) : 0.0;
  return report;
}

std::vector<SettlementPeriod> detect_low(const ForecastSeries& series, double trigger_gvas) {
  std::vector<SettlementPeriod> low;
  for (const auto& point : series.points) {
    if (point.predicted_gvas < trigger_gvas) low.push_back(point.period);
  }
  std::sort(low.begin(), low.end());
  return low;
}

void write_forecast_csv(const std::filesystem::path& path, const ForecastSeries& series) {
  csv::Writer out(path);
  out.row({"date", "period", "predicted_gvas", "actual_gvas", "below_trigger"});
  for (const auto& point : series.points) {
    out.row({to_string(point.period.date), std::to_string(point.period.period),
             csv::format_double(point.predicted_gvas),
             point.actual_gvas ? csv::format_double(*point.actual_gvas) : std::string(),
             point.below_trigger ? "1" : "0"});
  }
  out.close();
}

std::string eval_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["mae_gvas"] = report.mae_gvas;
  doc["mape"] = report.mape;
  doc["n_periods"] = report.n_periods;
  doc["worst_period"] = {{"date", to_string(report.worst_period.date)},
                         {"period", report.worst_period.period}};
  doc["worst_error_gvas"] = report.worst_error_gvas;
  doc["skipped_zero_actual"] = report.skipped_zero_actual;
  return doc.dump(2);
}

}  // namespace inertia::forecast
