#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "inertia/domain.hpp"

using namespace inertia;

TEST_CASE("h_constant hand arithmetic") {
  // 1.59 GVAs over a 530 MVA machine: 1590 / 530 = 3.0 s
  CHECK(h_constant(InertiaValue(1.59), 530.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(h_constant(InertiaValue(0.0), 100.0) == 0.0);
}

TEST_CASE("h_constant rejects non-positive nameplate") {
  CHECK_THROWS_AS(h_constant(InertiaValue(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(h_constant(InertiaValue(1.0), -5.0), std::invalid_argument);
  CHECK_THROWS_AS(h_constant(InertiaValue(1.0), std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("h_constant round-trips within 1e-12 relative") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w_dist(0.0, 20.0);
  std::uniform_real_distribution<double> s_dist(1.0, 1500.0);
  for (int i = 0; i < 2000; ++i) {
    const double w = w_dist(rng);
    const double s = s_dist(rng);
    const double back = inertia_from_h(h_constant(w, s), s);
    CHECK(std::abs(back - w) <= 1e-12 * std::max(1.0, w));
  }
}

TEST_CASE("value types reject NaN and infinity") {
  CHECK_THROWS_AS(InertiaValue(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(InertiaValue(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(InertiaValue(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(DemandValue(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(DemandValue(-1.0), std::invalid_argument);
  CHECK(InertiaValue(3.5).gvas() == 3.5);
  CHECK(DemandValue(28.0).gw() == 28.0);
}

TEST_CASE("fuel strings") {
  CHECK(fuel_from_string("ccgt") == FuelType::ccgt);
  CHECK(fuel_from_string("pumped_storage") == FuelType::pumped_storage);
  CHECK(fuel_from_string("interconnector") == FuelType::other);
  CHECK(fuel_from_string("") == FuelType::other);
  CHECK(to_string(FuelType::wind) == "wind");
}

TEST_CASE("settlement period validation and ordering") {
  CHECK_THROWS_AS(make_period(Date{2022, 1, 9}, 0), ParseError);
  CHECK_THROWS_AS(make_period(Date{2022, 1, 9}, 49), ParseError);
  const auto p8 = make_period(Date{2022, 1, 9}, 8);
  CHECK(p8.period == 8);
  // period 8 starts 3h30 after midnight
  CHECK(p8.utc_start() - make_period(Date{2022, 1, 9}, 1).utc_start() == 7 * 1800);
  CHECK(make_period(Date{2022, 1, 9}, 48) < make_period(Date{2022, 1, 10}, 1));
}

TEST_CASE("date parsing") {
  const auto d = parse_date("2022-01-09");
  CHECK(d == Date{2022, 1, 9});
  CHECK(to_string(d) == "2022-01-09");
  CHECK_THROWS_AS(parse_date("2022/01/09"), ParseError);
  CHECK_THROWS_AS(parse_date("2022-13-01"), ParseError);
  CHECK_THROWS_AS(parse_date("not-a-date"), ParseError);
  // epoch anchor and a leap day
  CHECK(days_from_civil(Date{1970, 1, 1}) == 0);
  CHECK(days_from_civil(Date{2020, 3, 1}) - days_from_civil(Date{2020, 2, 28}) == 2);
}
