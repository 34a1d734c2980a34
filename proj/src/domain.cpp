#include "inertia/domain.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace inertia {

namespace {

struct FuelName {
  std::string_view name;
  FuelType fuel;
};

constexpr std::array<FuelName, 11> kFuelNames = {{
    {"ccgt", FuelType::ccgt},
    {"coal", FuelType::coal},
    {"biomass", FuelType::biomass},
    {"gas", FuelType::gas},
    {"hydro", FuelType::hydro},
    {"pumped_storage", FuelType::pumped_storage},
    {"nuclear", FuelType::nuclear},
    {"wind", FuelType::wind},
    {"solar", FuelType::solar},
    {"battery", FuelType::battery},
    {"other", FuelType::other},
}};

}  // namespace

FuelType fuel_from_string(std::string_view s) noexcept {
  for (const auto& f : kFuelNames) {
    if (f.name == s) return f.fuel;
  }
  return FuelType::other;
}

std::string_view to_string(FuelType f) noexcept {
  for (const auto& entry : kFuelNames) {
    if (entry.fuel == f) return entry.name;
  }
  return "other";
}

Date parse_date(std::string_view s) {
  auto bad = [&] { throw ParseError("invalid date '" + std::string(s) + "', expected YYYY-MM-DD"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') bad();
  Date d;
  auto parse_int = [&](std::string_view part, int& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || p != part.data() + part.size()) bad();
  };
  parse_int(s.substr(0, 4), d.year);
  parse_int(s.substr(5, 2), d.month);
  parse_int(s.substr(8, 2), d.day);
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) bad();
  return d;
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(const Date& d) {
  std::int64_t y = d.year;
  const int m = d.month;
  const int day = d.day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

SettlementPeriod make_period(Date date, int period) {
  if (period < 1 || period > 48) {
    throw ParseError("settlement period " + std::to_string(period) + " outside 1..48");
  }
  return SettlementPeriod{date, period};
}

InertiaValue::InertiaValue(double gvas) : value_(gvas) {
  if (!std::isfinite(gvas) || gvas < 0.0) {
    throw std::invalid_argument("inertia value must be finite and non-negative");
  }
}

DemandValue::DemandValue(double gw) : value_(gw) {
  if (!std::isfinite(gw) || gw < 0.0) {
    throw std::invalid_argument("demand value must be finite and non-negative");
  }
}

double h_constant(double w_gvas, double nameplate_mva) {
  if (!(nameplate_mva > 0.0) || !std::isfinite(nameplate_mva)) {
    throw std::invalid_argument("nameplate capacity must be strictly positive");
  }
  return w_gvas * 1000.0 / nameplate_mva;
}

double h_constant(InertiaValue w, double nameplate_mva) {
  return h_constant(w.gvas(), nameplate_mva);
}

double inertia_from_h(double h_seconds, double nameplate_mva) {
  if (!(nameplate_mva > 0.0) || !std::isfinite(nameplate_mva)) {
    throw std::invalid_argument("nameplate capacity must be strictly positive");
  }
  return h_seconds * nameplate_mva / 1000.0;
}

}  // namespace inertia
