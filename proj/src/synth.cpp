#include "inertia/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "inertia/csv.hpp"

namespace inertia::synth {

double Rng::normal(double mean, double sigma) {
  // discard u1 == 0 so the log stays finite
  double u1 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sigma * z;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // multiply-shift map of the 64-bit draw onto [0, n)
  const unsigned __int128 wide = static_cast<unsigned __int128>(engine_()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

namespace {

constexpr FuelType kZeroFuels[] = {FuelType::wind, FuelType::solar, FuelType::battery};
constexpr FuelType kRotatingFuels[] = {FuelType::ccgt,  FuelType::coal,
                                       FuelType::biomass, FuelType::gas,
                                       FuelType::hydro, FuelType::pumped_storage,
                                       FuelType::nuclear};

Date next_day(Date d) {
  static constexpr int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = month_days[d.month - 1];
  const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) dim = 29;
  if (++d.day > dim) {
    d.day = 1;
    if (++d.month > 12) {
      d.month = 1;
      ++d.year;
    }
  }
  return d;
}

double diurnal_demand_gw(int period_index) {
  const double phase = 2.0 * std::numbers::pi * double(period_index % 48) / 48.0;
  return 32.0 + 9.0 * std::sin(phase - 2.1) + 2.0 * std::sin(2.0 * phase + 0.6);
}

std::string plant_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "SYN-%04d", i + 1);
  return buf;
}

}  // namespace

Scenario generate(const ScenarioConfig& config) {
  if (config.n_plants <= 0) throw std::invalid_argument("n_plants must be positive");
  if (config.n_periods <= 0) throw std::invalid_argument("n_periods must be positive");
  if (config.zero_fraction < 0.0 || config.zero_fraction > 1.0) {
    throw std::invalid_argument("zero_fraction must lie in [0, 1]");
  }
  if (config.duty_cycle < 0.0 || config.duty_cycle > 1.0) {
    throw std::invalid_argument("duty_cycle must lie in [0, 1]");
  }
  if (config.tso_action_rate < 0.0 || config.tso_action_rate > 1.0) {
    throw std::invalid_argument("tso_action_rate must lie in [0, 1]");
  }
  if (config.noise_sigma_gvas < 0.0 || config.w_dem_true < 0.0) {
    throw std::invalid_argument("noise_sigma and w_dem_true must be non-negative");
  }

  Rng rng(config.seed);
  Scenario sc;
  sc.config = config;

  const int n = config.n_plants;
  const int n_zero = int(std::llround(config.zero_fraction * n));

  // fleet: zero-inertia plants first, then rotating plants with H in [2, 10] s
  // and nameplates in [20, 800] MVA
  for (int i = 0; i < n; ++i) {
    Plant p;
    p.id = plant_name(i);
    p.nameplate_mva = rng.uniform(20.0, 800.0);
    if (i < n_zero) {
      p.fuel = kZeroFuels[i % std::size(kZeroFuels)];
      p.true_inertia_gvas = 0.0;
    } else {
      p.fuel = kRotatingFuels[(i - n_zero) % std::size(kRotatingFuels)];
      const double h = rng.uniform(2.0, 10.0);
      p.true_inertia_gvas = inertia_from_h(h, p.nameplate_mva);
    }
    sc.plants.push_back(std::move(p));
  }

  // injected colinear pairs: consecutive rotating plants share fuel,
  // nameplate, inertia and (below) schedule
  sc.injected_groups = ingest::ColinearityGroups::singletons(std::size_t(n));
  std::vector<int> schedule_source(n);
  for (int i = 0; i < n; ++i) schedule_source[i] = i;
  int pairs_left = config.colinear_pairs;
  for (int i = n_zero; i + 1 < n && pairs_left > 0; i += 2, --pairs_left) {
    sc.plants[i + 1].fuel = sc.plants[i].fuel;
    sc.plants[i + 1].nameplate_mva = sc.plants[i].nameplate_mva;
    sc.plants[i + 1].true_inertia_gvas = sc.plants[i].true_inertia_gvas;
    schedule_source[i + 1] = i;
  }
  {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> group_of(n);
    for (int i = 0; i < n; ++i) {
      if (schedule_source[i] == i) {
        group_of[i] = groups.size();
        groups.push_back({std::size_t(i)});
      } else {
        group_of[i] = group_of[schedule_source[i]];
        groups[group_of[i]].push_back(std::size_t(i));
      }
    }
    sc.injected_groups.groups = std::move(groups);
    sc.injected_groups.group_of = std::move(group_of);
  }

  for (const auto& p : sc.plants) sc.dispatch_level_mw.push_back(0.8 * p.nameplate_mva);

  auto& ind = sc.indicators;
  for (const auto& p : sc.plants) ind.plants.push_back(p.id);
  ind.periods.reserve(config.n_periods);
  {
    Date d = config.start_date;
    int p = 1;
    for (int t = 0; t < config.n_periods; ++t) {
      ind.periods.push_back(SettlementPeriod{d, p});
      if (++p > 48) {
        p = 1;
        d = next_day(d);
      }
    }
  }
  ind.market.assign(std::size_t(config.n_periods) * n, 0);
  ind.tso.assign(std::size_t(config.n_periods) * n, 0);

  for (int t = 0; t < config.n_periods; ++t) {
    for (int j = 0; j < n; ++j) {
      if (schedule_source[j] != j) {
        ind.market[ind.idx(t, j)] = ind.market[ind.idx(t, schedule_source[j])];
        continue;
      }
      ind.market[ind.idx(t, j)] = rng.uniform01() < config.duty_cycle ? 1 : 0;
    }
  }

  // TSO actions only ever switch an OFF plant on, so outturn >= market
  for (int t = 0; t < config.n_periods; ++t) {
    if (config.tso_action_rate == 0.0 || rng.uniform01() >= config.tso_action_rate) continue;
    std::vector<int> off;
    for (int j = 0; j < n; ++j) {
      if (!ind.market[ind.idx(t, j)]) off.push_back(j);
    }
    if (off.empty()) continue;
    const int j = off[std::size_t(rng.below(off.size()))];
    ind.tso[ind.idx(t, j)] = 1;
  }

  sc.series.points.reserve(config.n_periods);
  for (int t = 0; t < config.n_periods; ++t) {
    ingest::AggregatePoint point;
    point.period = ind.periods[std::size_t(t)];
    point.demand_gw = diurnal_demand_gw(t);
    double market = config.w_dem_true * point.demand_gw;
    for (int j = 0; j < n; ++j) {
      if (ind.market[ind.idx(t, j)]) market += *sc.plants[j].true_inertia_gvas;
    }
    if (config.noise_sigma_gvas > 0.0) {
      market += rng.normal(0.0, config.noise_sigma_gvas);
    }
    market = std::max(0.0, market);
    double tso_added = 0.0;
    for (int j = 0; j < n; ++j) {
      if (ind.tso[ind.idx(t, j)] > 0) tso_added += *sc.plants[j].true_inertia_gvas;
    }
    point.market_gvas = market;
    point.outturn_gvas = market + tso_added;
    sc.series.points.push_back(point);
  }
  return sc;
}

RecoveryReport recovery_report(const est::InertiaSolution& sol, const Scenario& scenario) {
  RecoveryReport report;
  double sum = 0.0;
  for (const auto& p : scenario.plants) {
    const auto it = sol.w.find(p.id);
    if (it == sol.w.end()) {
      throw AlignmentError("solution is missing plant " + p.id);
    }
    const double truth = *p.true_inertia_gvas;
    const double err = std::abs(it->second - truth);
    report.abs_errors.emplace_back(p.id, err);
    report.max_abs_error = std::max(report.max_abs_error, err);
    sum += err;
    if (truth == 0.0 && it->second > 0.0) ++report.false_positive_nonzeros;
    if (truth > 0.0 && it->second == 0.0) ++report.false_negative_zeros;
  }
  report.mean_abs_error = scenario.plants.empty() ? 0.0 : sum / double(scenario.plants.size());
  return report;
}

void export_scenario(const Scenario& sc, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& ind = sc.indicators;
  const std::size_t n = ind.plants.size();

  {
    csv::Writer w(dir / "positions.csv");
    w.row({"plant_id", "date", "period", "level_mw"});
    for (std::size_t t = 0; t < ind.periods.size(); ++t) {
      for (std::size_t j = 0; j < n; ++j) {
        const double level = ind.market_at(t, j) ? sc.dispatch_level_mw[j] : 0.0;
        w.row({ind.plants[j], to_string(ind.periods[t].date),
               std::to_string(ind.periods[t].period), csv::format_double(level)});
      }
    }
    w.close();
  }
  {
    csv::Writer w(dir / "actions.csv");
    w.row({"plant_id", "date", "period", "accepted_delta_mw"});
    for (std::size_t t = 0; t < ind.periods.size(); ++t) {
      for (std::size_t j = 0; j < n; ++j) {
        if (ind.tso_at(t, j) > 0) {
          w.row({ind.plants[j], to_string(ind.periods[t].date),
                 std::to_string(ind.periods[t].period),
                 csv::format_double(sc.dispatch_level_mw[j])});
        }
      }
    }
    w.close();
  }
  {
    csv::Writer w(dir / "market_inertia.csv");
    w.row({"date", "period", "inertia_gvas"});
    for (const auto& p : sc.series.points) {
      w.row({to_string(p.period.date), std::to_string(p.period.period),
             csv::format_double(p.market_gvas)});
    }
    w.close();
  }
  {
    csv::Writer w(dir / "outturn_inertia.csv");
    w.row({"date", "period", "inertia_gvas"});
    for (const auto& p : sc.series.points) {
      w.row({to_string(p.period.date), std::to_string(p.period.period),
             csv::format_double(p.outturn_gvas)});
    }
    w.close();
  }
  {
    csv::Writer w(dir / "demand.csv");
    w.row({"date", "period", "demand_gw"});
    for (const auto& p : sc.series.points) {
      w.row({to_string(p.period.date), std::to_string(p.period.period),
             csv::format_double(p.demand_gw)});
    }
    w.close();
  }
  {
    csv::Writer w(dir / "plants.csv");
    w.row({"plant_id", "fuel", "nameplate_mva"});
    for (const auto& p : sc.plants) {
      w.row({p.id, to_string(p.fuel), csv::format_double(p.nameplate_mva)});
    }
    w.close();
  }
  {
    csv::Writer w(dir / "ground_truth.csv");
    w.row({"plant_id", "w_true_gvas"});
    for (const auto& p : sc.plants) {
      w.row({p.id, csv::format_double(*p.true_inertia_gvas)});
    }
    w.close();
  }
}

}  // namespace inertia::synth
