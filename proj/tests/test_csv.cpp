#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>

#include "inertia/csv.hpp"

using namespace inertia;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("reader maps headers and parses rows") {
  const auto path = write_temp("csv_basic.csv", "a,b,c\n1,2.5,x\n4,-1.25,y\n");
  csv::Reader r(path);
  CHECK(r.column("b") == 1);
  CHECK(r.column("missing") == -1);
  CHECK_THROWS_AS(r.require("missing"), SchemaError);
  REQUIRE(r.next());
  CHECK(r.integer(0) == 1);
  CHECK(r.number(1) == 2.5);
  CHECK(r.field(2) == "x");
  REQUIRE(r.next());
  CHECK(r.number(1) == -1.25);
  CHECK(!r.next());
}

TEST_CASE("reader flags malformed rows with line numbers") {
  const auto path = write_temp("csv_bad.csv", "a,b\n1,2\n3\n");
  csv::Reader r(path);
  REQUIRE(r.next());
  CHECK_THROWS_WITH_AS(r.next(), doctest::Contains(":3"), ParseError);
}

TEST_CASE("reader rejects non-numeric and non-finite values") {
  const auto path = write_temp("csv_nan.csv", "v\nnan\n");
  csv::Reader r(path);
  REQUIRE(r.next());
  CHECK_THROWS_AS(r.number(0), ParseError);
}

TEST_CASE("reader tolerates CRLF and blank lines") {
  const auto path = write_temp("csv_crlf.csv", "a,b\r\n1,2\r\n\r\n3,4\r\n");
  csv::Reader r(path);
  REQUIRE(r.next());
  CHECK(r.integer(0) == 1);
  REQUIRE(r.next());
  CHECK(r.integer(1) == 4);
  CHECK(!r.next());
}

TEST_CASE("missing header row is a schema error") {
  const auto path = write_temp("csv_empty.csv", "");
  CHECK_THROWS_AS(csv::Reader{path}, SchemaError);
}

TEST_CASE("format_double round-trips doubles exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = dist(rng);
    const auto s = csv::format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(csv::format_double(0.0) == "0");
  CHECK(csv::format_double(3.5) == "3.5");
}
