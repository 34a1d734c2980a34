#include "inertia/csv.hpp"

#include <charconv>
#include <cmath>

namespace inertia::csv {

Reader::Reader(const std::filesystem::path& path) : path_(path), in_(path) {
  if (!in_) {
    throw ParseError("cannot open " + path.string());
  }
  std::string raw;
  if (!std::getline(in_, raw)) {
    throw SchemaError(path.string() + ": missing header row");
  }
  line_ = 1;
  split(raw);
  header_ = fields_;
}

int Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int Reader::require(std::string_view name) const {
  const int idx = column(name);
  if (idx < 0) {
    throw SchemaError(path_.string() + ": missing required column '" + std::string(name) + "'");
  }
  return idx;
}

bool Reader::next() {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (raw.empty() || (raw.size() == 1 && raw[0] == '\r')) continue;
    split(raw);
    if (fields_.size() != header_.size()) {
      fail("expected " + std::to_string(header_.size()) + " fields, got " +
           std::to_string(fields_.size()));
    }
    return true;
  }
  return false;
}

void Reader::split(const std::string& raw) {
  fields_.clear();
  std::string_view rest = raw;
  if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
  while (true) {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      fields_.emplace_back(rest);
      break;
    }
    fields_.emplace_back(rest.substr(0, comma));
    rest.remove_prefix(comma + 1);
  }
}

void Reader::fail(const std::string& what) const {
  throw ParseError(path_.string() + ":" + std::to_string(line_) + ": " + what);
}

std::string_view Reader::field(int col) const {
  if (col < 0 || static_cast<std::size_t>(col) >= fields_.size()) {
    fail("column index out of range");
  }
  return fields_[static_cast<std::size_t>(col)];
}

double Reader::number(int col) const {
  const auto s = field(col);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    fail("invalid number '" + std::string(s) + "'");
  }
  return v;
}

long Reader::integer(int col) const {
  const auto s = field(col);
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    fail("invalid integer '" + std::string(s) + "'");
  }
  return v;
}

Date Reader::date(int col) const {
  try {
    return parse_date(field(col));
  } catch (const ParseError& e) {
    fail(e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

Writer::Writer(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) {
    throw ParseError("cannot open " + path.string() + " for writing");
  }
}

void Writer::row(std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (const auto f : fields) {
    if (!first) out_ << ',';
    out_ << f;
    first = false;
  }
  out_ << '\n';
}

void Writer::close() {
  out_.close();
  if (!out_) {
    throw ParseError("failed writing " + path_.string());
  }
}

}  // namespace inertia::csv
