#include "inertia/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "inertia/csv.hpp"
#include "inertia/kernels.hpp"

namespace inertia::ingest {

std::vector<SettlementPeriod> AggregateSeries::periods() const {
  std::vector<SettlementPeriod> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.period);
  return out;
}

bool IndicatorMatrix::has_tso_actions() const {
  return std::any_of(tso.begin(), tso.end(), [](std::int8_t v) { return v != 0; });
}

ColinearityGroups ColinearityGroups::singletons(std::size_t n_plants) {
  ColinearityGroups g;
  g.groups.resize(n_plants);
  g.group_of.resize(n_plants);
  for (std::size_t i = 0; i < n_plants; ++i) {
    g.groups[i] = {i};
    g.group_of[i] = i;
  }
  return g;
}

PositionsTable load_positions(const std::filesystem::path& path) {
  csv::Reader r(path);
  const int c_plant = r.require("plant_id");
  const int c_date = r.require("date");
  const int c_period = r.require("period");
  const int c_level = r.require("level_mw");

  PositionsTable table;
  std::set<std::pair<PlantId, SettlementPeriod>> seen;
  while (r.next()) {
    PositionRow row;
    row.plant = std::string(r.field(c_plant));
    if (row.plant.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) + ": empty plant_id");
    }
    row.period = make_period(r.date(c_date), static_cast<int>(r.integer(c_period)));
    row.level_mw = r.number(c_level);
    if (row.level_mw < 0.0) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) +
                       ": negative level_mw " + csv::format_double(row.level_mw));
    }
    if (!seen.insert({row.plant, row.period}).second) {
      throw SchemaError(path.string() + ":" + std::to_string(r.line()) +
                        ": duplicate (plant, period) key " + row.plant + " " +
                        to_string(row.period.date) + " p" + std::to_string(row.period.period));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ActionsTable load_actions(const std::filesystem::path& path) {
  csv::Reader r(path);
  const int c_plant = r.require("plant_id");
  const int c_date = r.require("date");
  const int c_period = r.require("period");
  const int c_delta = r.require("accepted_delta_mw");

  // Multiple acceptances for one (plant, period) net out.
  std::map<std::pair<PlantId, SettlementPeriod>, double> net;
  while (r.next()) {
    PlantId plant{r.field(c_plant)};
    if (plant.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) + ": empty plant_id");
    }
    const auto period = make_period(r.date(c_date), static_cast<int>(r.integer(c_period)));
    net[{std::move(plant), period}] += r.number(c_delta);
  }

  ActionsTable table;
  for (const auto& [key, delta] : net) {
    ActionRow row;
    row.plant = key.first;
    row.period = key.second;
    row.accepted_delta_mw = delta;
    row.direction = delta > 0.0   ? ActionDirection::on
                    : delta < 0.0 ? ActionDirection::off
                                  : ActionDirection::none;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<Plant> load_plants(const std::filesystem::path& path) {
  csv::Reader r(path);
  const int c_plant = r.require("plant_id");
  const int c_fuel = r.require("fuel");
  const int c_nameplate = r.require("nameplate_mva");

  std::vector<Plant> plants;
  std::set<PlantId> seen;
  while (r.next()) {
    Plant p;
    p.id = std::string(r.field(c_plant));
    if (p.id.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) + ": empty plant_id");
    }
    p.fuel = fuel_from_string(r.field(c_fuel));
    p.nameplate_mva = r.number(c_nameplate);
    if (!(p.nameplate_mva > 0.0)) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) +
                       ": nameplate_mva must be strictly positive");
    }
    if (!seen.insert(p.id).second) {
      throw SchemaError(path.string() + ":" + std::to_string(r.line()) +
                        ": duplicate plant_id " + p.id);
    }
    plants.push_back(std::move(p));
  }
  return plants;
}

std::vector<PeriodValue> load_period_series(const std::filesystem::path& path,
                                            std::string_view value_column) {
  csv::Reader r(path);
  const int c_date = r.require("date");
  const int c_period = r.require("period");
  const int c_value = r.require(value_column);

  std::map<SettlementPeriod, double> by_period;
  while (r.next()) {
    const auto period = make_period(r.date(c_date), static_cast<int>(r.integer(c_period)));
    const double v = r.number(c_value);
    if (v < 0.0) {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) + ": negative " +
                       std::string(value_column));
    }
    if (!by_period.emplace(period, v).second) {
      throw SchemaError(path.string() + ":" + std::to_string(r.line()) +
                        ": duplicate period " + to_string(period.date) + " p" +
                        std::to_string(period.period));
    }
  }
  std::vector<PeriodValue> out;
  out.reserve(by_period.size());
  for (const auto& [period, v] : by_period) out.push_back({period, v});
  return out;
}

AggregateSeries load_aggregate(const std::filesystem::path& market,
                               const std::filesystem::path& outturn,
                               const std::filesystem::path& demand) {
  const auto m = load_period_series(market, "inertia_gvas");
  const auto o = load_period_series(outturn, "inertia_gvas");
  const auto d = load_period_series(demand, "demand_gw");

  std::map<SettlementPeriod, AggregatePoint> joined;
  std::set<SettlementPeriod> all;
  for (const auto& p : m) {
    joined[p.period].period = p.period;
    joined[p.period].market_gvas = p.value;
    all.insert(p.period);
  }
  std::set<SettlementPeriod> in_o;
  for (const auto& p : o) {
    in_o.insert(p.period);
    all.insert(p.period);
    if (auto it = joined.find(p.period); it != joined.end()) it->second.outturn_gvas = p.value;
  }
  std::set<SettlementPeriod> in_d;
  for (const auto& p : d) {
    in_d.insert(p.period);
    all.insert(p.period);
    if (auto it = joined.find(p.period); it != joined.end()) it->second.demand_gw = p.value;
  }

  AggregateSeries series;
  for (const auto& [period, point] : joined) {
    if (in_o.contains(period) && in_d.contains(period)) {
      series.points.push_back(point);
    }
  }
  series.dropped_periods = all.size() - series.points.size();
  if (series.points.empty()) {
    throw AlignmentError("aggregate inputs share no settlement period");
  }
  return series;
}

IndicatorMatrix build_indicators(const PositionsTable& positions, const ActionsTable& actions,
                                 std::span<const SettlementPeriod> periods,
                                 double on_threshold_mw) {
  IndicatorMatrix ind;
  ind.periods.assign(periods.begin(), periods.end());
  std::sort(ind.periods.begin(), ind.periods.end());

  std::map<SettlementPeriod, std::size_t> period_index;
  for (std::size_t t = 0; t < ind.periods.size(); ++t) period_index[ind.periods[t]] = t;

  std::set<PlantId> plant_set;
  for (const auto& row : positions.rows) plant_set.insert(row.plant);
  ind.plants.assign(plant_set.begin(), plant_set.end());
  std::map<PlantId, std::size_t> plant_index;
  for (std::size_t j = 0; j < ind.plants.size(); ++j) plant_index[ind.plants[j]] = j;

  const std::size_t n = ind.plants.size();
  ind.market.assign(ind.periods.size() * n, 0);
  ind.tso.assign(ind.periods.size() * n, 0);

  // level per (period, plant); rows absent from the positions table are OFF.
  linalg::Matrix level(ind.periods.size(), n);
  for (const auto& row : positions.rows) {
    const auto it = period_index.find(row.period);
    if (it == period_index.end()) {
      throw AlignmentError("positions row for " + to_string(row.period.date) + " p" +
                           std::to_string(row.period.period) +
                           " outside the aggregate series coverage");
    }
    level(it->second, plant_index.at(row.plant)) = row.level_mw;
  }
  for (std::size_t t = 0; t < ind.periods.size(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      ind.market[ind.idx(t, j)] = level(t, j) > on_threshold_mw ? 1 : 0;
    }
  }

  std::set<PlantId> warned;
  for (const auto& row : actions.rows) {
    const auto pit = plant_index.find(row.plant);
    if (pit == plant_index.end()) {
      if (warned.insert(row.plant).second) {
        ind.warnings.push_back("action for unknown plant " + row.plant + " ignored");
      }
      continue;
    }
    const auto tit = period_index.find(row.period);
    if (tit == period_index.end()) {
      throw AlignmentError("actions row for " + to_string(row.period.date) + " p" +
                           std::to_string(row.period.period) +
                           " outside the aggregate series coverage");
    }
    const double before = level(tit->second, pit->second);
    const double after = before + row.accepted_delta_mw;
    std::int8_t v = 0;
    if (before <= on_threshold_mw && after > on_threshold_mw) v = 1;
    if (before > on_threshold_mw && after <= on_threshold_mw) v = -1;
    ind.tso[ind.idx(tit->second, pit->second)] = v;
  }
  return ind;
}

IndicatorMatrix build_indicators(const PositionsTable& positions, const ActionsTable& actions,
                                 const AggregateSeries& series, double on_threshold_mw) {
  const auto periods = series.periods();
  return build_indicators(positions, actions, periods, on_threshold_mw);
}

ColinearityGroups group_colinear(const IndicatorMatrix& ind, std::span<const Plant> fleet,
                                 double agreement) {
  if (!(agreement > 0.5) || !(agreement <= 1.0)) {
    throw std::invalid_argument("agreement must lie in (0.5, 1.0]");
  }
  const std::size_t n = ind.plants.size();
  const std::size_t n_periods = ind.periods.size();

  std::map<PlantId, FuelType> fuel;
  for (const auto& p : fleet) fuel[p.id] = p.fuel;
  auto fuel_of = [&](std::size_t j) {
    const auto it = fuel.find(ind.plants[j]);
    return it == fuel.end() ? FuelType::other : it->second;
  };

  // union-find, merged in ascending (i, k) order for determinism
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };

  if (n_periods > 0 && n > 1) {
    const auto agree = kernels::pairwise_agreement(ind.market.data(), n_periods, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        if (fuel_of(i) != fuel_of(k)) continue;
        const double frac = double(agree[i * n + k]) / double(n_periods);
        if (frac >= agreement) {
          const auto ri = find(i);
          const auto rk = find(k);
          if (ri != rk) parent[std::max(ri, rk)] = std::min(ri, rk);
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(i);

  ColinearityGroups out;
  out.group_of.resize(n);
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    for (const auto m : members) out.group_of[m] = out.groups.size();
    out.groups.push_back(std::move(members));
  }
  return out;
}

}  // namespace inertia::ingest
