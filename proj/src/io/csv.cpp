#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "telegraph/errors.hpp"
#include "telegraph/io.hpp"

namespace telegraph::io {

void EvalGrid::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
    throw DomainError("grid: require finite start < stop");
  }
  if (points < 2) throw DomainError("grid: require at least 2 points");
}

std::vector<double> EvalGrid::values() const {
  validate();
  std::vector<double> v(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) v[i] = start + step * static_cast<double>(i);
  v.back() = stop;
  return v;
}

EvalGrid EvalGrid::parse(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw DomainError("grid: expected start:stop:points, got '" + std::string(text) + "'");
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw DomainError("grid: bad number '" + std::string(s) + "'");
    return v;
  };
  EvalGrid g;
  g.start = number(text.substr(0, a));
  g.stop = number(text.substr(a + 1, b - a - 1));
  const auto count = text.substr(b + 1);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (ec != std::errc{} || ptr != count.data() + count.size()) {
    throw DomainError("grid: bad point count '" + std::string(count) + "'");
  }
  g.points = n;
  g.validate();
  return g;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void CsvWriter::header(const std::vector<std::string>& names) { row_cells(names); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace telegraph::io
