#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "inertia/domain.hpp"

namespace inertia::ingest {

struct PositionRow {
  PlantId plant;
  SettlementPeriod period;
  double level_mw = 0.0;  // >= 0
};

struct PositionsTable {
  std::vector<PositionRow> rows;
};

enum class ActionDirection : std::uint8_t { on, off, none };

// One netted row per (plant, period): multiple acceptances within the same
// period are summed at load time.
struct ActionRow {
  PlantId plant;
  SettlementPeriod period;
  double accepted_delta_mw = 0.0;
  ActionDirection direction = ActionDirection::none;
};

struct ActionsTable {
  std::vector<ActionRow> rows;
};

struct AggregatePoint {
  SettlementPeriod period;
  double market_gvas = 0.0;
  double outturn_gvas = 0.0;
  double demand_gw = 0.0;
};

struct AggregateSeries {
  std::vector<AggregatePoint> points;   // strictly increasing periods
  std::size_t dropped_periods = 0;      // periods lost to the inner join

  std::vector<SettlementPeriod> periods() const;
};

// Market on/off and TSO action indicators, rows = periods, cols = plants.
// Plants are ordered by id, periods by time, so the matrix is independent of
// input row order.
struct IndicatorMatrix {
  std::vector<SettlementPeriod> periods;
  std::vector<PlantId> plants;
  std::vector<std::int8_t> market;  // {0,1}, row-major periods x plants
  std::vector<std::int8_t> tso;     // {-1,0,1}
  std::vector<std::string> warnings;

  std::size_t idx(std::size_t t, std::size_t j) const { return t * plants.size() + j; }
  std::int8_t market_at(std::size_t t, std::size_t j) const { return market[idx(t, j)]; }
  std::int8_t tso_at(std::size_t t, std::size_t j) const { return tso[idx(t, j)]; }
  bool has_tso_actions() const;
};

// Partition of plant indices into equal-inertia groups. Groups are ordered by
// their smallest member index, members ascending.
struct ColinearityGroups {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of;  // plant index -> group index

  static ColinearityGroups singletons(std::size_t n_plants);
};

PositionsTable load_positions(const std::filesystem::path& path);
ActionsTable load_actions(const std::filesystem::path& path);
std::vector<Plant> load_plants(const std::filesystem::path& path);

// One (date, period, value) series; used for the three aggregate files.
struct PeriodValue {
  SettlementPeriod period;
  double value = 0.0;
};
std::vector<PeriodValue> load_period_series(const std::filesystem::path& path,
                                            std::string_view value_column);

// Inner join of the three aggregate inputs over their common periods.
// Throws AlignmentError when the intersection is empty.
AggregateSeries load_aggregate(const std::filesystem::path& market,
                               const std::filesystem::path& outturn,
                               const std::filesystem::path& demand);

IndicatorMatrix build_indicators(const PositionsTable& positions, const ActionsTable& actions,
                                 std::span<const SettlementPeriod> periods,
                                 double on_threshold_mw);
IndicatorMatrix build_indicators(const PositionsTable& positions, const ActionsTable& actions,
                                 const AggregateSeries& series, double on_threshold_mw);

// Plants i, k share a group iff their market columns agree on at least
// `agreement` of the periods and they share a fuel type; grouping is the
// transitive closure. Plants missing from `fleet` count as FuelType::other.
ColinearityGroups group_colinear(const IndicatorMatrix& ind, std::span<const Plant> fleet,
                                 double agreement);

}  // namespace inertia::ingest
