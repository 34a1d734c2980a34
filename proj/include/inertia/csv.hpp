#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "inertia/domain.hpp"

namespace inertia::csv {

// Header-mapped reader for the fixture schemas: UTF-8, comma separated,
// '.' decimal, header row required. Quoting is not supported; none of the
// schemas carry free text.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  // Index of a header column, or -1 when absent.
  int column(std::string_view name) const;
  // Same, but a missing column is a SchemaError naming the file.
  int require(std::string_view name) const;

  // Advances to the next data row; false at end of file.
  bool next();

  std::size_t line() const { return line_; }
  const std::filesystem::path& path() const { return path_; }

  std::string_view field(int col) const;
  double number(int col) const;   // finite double, ParseError with line number
  long integer(int col) const;
  Date date(int col) const;

 private:
  void split(const std::string& raw);
  [[noreturn]] void fail(const std::string& what) const;

  std::filesystem::path path_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  std::size_t line_ = 0;
};

// Shortest representation that round-trips the double exactly.
std::string format_double(double v);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void row(std::initializer_list<std::string_view> fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace inertia::csv
