#pragma once

#include "hesn/csv.hpp"

#include <string>
#include <vector>

namespace hesn {

enum class PlotMode {
  kLines,  // each column against x_column (or the row index when x_column is absent)
  kPhase,  // the second column against the first
};

struct PlotOptions {
  PlotMode mode = PlotMode::kLines;
  std::string x_column = "t";
  int width = 800;
  int height = 480;
  std::string title;
};

/// One polyline per plotted series. Output depends only on the inputs.
std::string render_svg(const Table& table, const std::vector<std::string>& columns,
                       const PlotOptions& options = {});

void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& out_svg, const PlotOptions& options = {});

}  // namespace hesn
