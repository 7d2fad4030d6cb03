#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent CSV output and evaluation grids.
namespace telegraph::io {

/// Uniform grid of `points` values from start to stop inclusive.
struct EvalGrid {
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;

  /// Throws DomainError unless start < stop, both finite, points >= 2.
  void validate() const;
  std::vector<double> values() const;
  /// Parses "start:stop:points".
  static EvalGrid parse(std::string_view text);
};

/// Shortest round-trip representation, at most 17 significant digits,
/// always with '.' as decimal separator.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  /// Cells already formatted (e.g. integers or labels).
  void row_cells(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

}  // namespace telegraph::io
