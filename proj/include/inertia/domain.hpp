#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace inertia {

// Error taxonomy shared by the library. The CLI maps these onto exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Model persistence problems (wrong schema version, malformed document).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PlantId = std::string;

enum class FuelType : std::uint8_t {
  ccgt,
  coal,
  biomass,
  gas,
  hydro,
  pumped_storage,
  nuclear,
  wind,
  solar,
  battery,
  other,
};

// Unknown strings map to FuelType::other.
FuelType fuel_from_string(std::string_view s) noexcept;
std::string_view to_string(FuelType f) noexcept;

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;
  auto operator<=>(const Date&) const = default;
};

Date parse_date(std::string_view s);  // "YYYY-MM-DD", throws ParseError
std::string to_string(const Date& d);
std::int64_t days_from_civil(const Date& d);  // days since 1970-01-01

// Half-hourly settlement period, 48 per day. (date, period) is the canonical
// key; the UTC timestamp is derived from it in one place only.
struct SettlementPeriod {
  Date date;
  int period = 1;  // 1..48

  std::int64_t utc_start() const {
    return days_from_civil(date) * 86400 + std::int64_t(period - 1) * 1800;
  }
  auto operator<=>(const SettlementPeriod&) const = default;
};

SettlementPeriod make_period(Date date, int period);  // validates 1..48

// Raw system inertia, GVAs. Non-negative and finite by construction.
class InertiaValue {
 public:
  InertiaValue() = default;
  explicit InertiaValue(double gvas);
  double gvas() const { return value_; }

 private:
  double value_ = 0.0;
};

// System demand, GW. Non-negative and finite by construction.
class DemandValue {
 public:
  DemandValue() = default;
  explicit DemandValue(double gw);
  double gw() const { return value_; }

 private:
  double value_ = 0.0;
};

struct Plant {
  PlantId id;
  FuelType fuel = FuelType::other;
  double nameplate_mva = 0.0;  // strictly positive
  std::optional<double> true_inertia_gvas;  // synthetic scenarios only
};

// Inertia constant H in seconds: raw inertia normalised by nameplate rating.
// w is in GVAs, nameplate in MVA, so H = w * 1000 / nameplate.
double h_constant(InertiaValue w, double nameplate_mva);
double h_constant(double w_gvas, double nameplate_mva);

// Inverse of h_constant: w = H * nameplate / 1000, in GVAs.
double inertia_from_h(double h_seconds, double nameplate_mva);

}  // namespace inertia
