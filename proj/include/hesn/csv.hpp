#pragma once

#include "hesn/time_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hesn {

/// Numeric CSV held column-wise. Lines starting with '#' are comments.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> comments;  // without the leading '#'

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of a named column or nullopt.
  std::optional<std::size_t> find(const std::string& name) const;
  /// Named column; throws kInvalidArgument when missing.
  const std::vector<double>& column(const std::string& name) const;
  void add_column(std::string name, std::vector<double> values);
};

Table read_csv(const std::string& path);
Table parse_csv(const std::string& text, const std::string& origin = "<text>");
/// Comment lines are written first, then the header and the rows.
void write_csv(const std::string& path, const Table& table);
std::string format_csv(const Table& table);

/// Columns t, eta_1..eta_N, mu_1..mu_N, plus u_f when x_f is given.
Table series_table(const TimeSeries& series, std::optional<double> x_f = std::nullopt);
/// Inverse of series_table; extra columns are ignored, sampling must be uniform.
TimeSeries series_from_table(const Table& table);

}  // namespace hesn
