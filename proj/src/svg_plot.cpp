#include "hesn/svg_plot.hpp"

#include "hesn/error.hpp"
#include "hesn/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace hesn {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) lo -= 0.5, hi += 0.5;
  }
};

}  // namespace

std::string render_svg(const Table& table, const std::vector<std::string>& columns,
                       const PlotOptions& options) {
  require(!columns.empty(), ErrorCode::kInvalidArgument, "no columns to plot");
  require(options.width >= 100 && options.height >= 100, ErrorCode::kInvalidArgument,
          "plot must be at least 100x100");
  if (options.mode == PlotMode::kPhase)
    require(columns.size() == 2, ErrorCode::kInvalidArgument, "phase plot needs exactly two columns");

  std::vector<double> index;
  const std::vector<double>* x = nullptr;
  std::vector<const std::vector<double>*> ys;
  std::vector<std::string> names;
  if (options.mode == PlotMode::kPhase) {
    x = &table.column(columns[0]);
    ys.push_back(&table.column(columns[1]));
    names.push_back(columns[1] + " vs " + columns[0]);
  } else {
    if (table.find(options.x_column)) {
      x = &table.column(options.x_column);
    } else {
      index.resize(table.rows());
      for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i);
      x = &index;
    }
    for (const auto& c : columns) {
      ys.push_back(&table.column(c));
      names.push_back(c);
    }
  }

  Range rx, ry;
  for (double v : *x) rx.add(v);
  for (const auto* y : ys)
    for (double v : *y) ry.add(v);
  rx.settle();
  ry.settle();

  const double left = 70, right = 20, top = options.title.empty() ? 20 : 40, bottom = 50;
  const double w = options.width - left - right, h = options.height - top - bottom;
  auto px = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * w; };
  auto py = [&](double v) { return top + h - (v - ry.lo) / (ry.hi - ry.lo) * h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(w) +
         "\" height=\"" + fixed(h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!options.title.empty())
    svg += "<text x=\"" + fixed(left + w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(options.title) + "</text>\n";
  const std::string font = "font-family=\"sans-serif\" font-size=\"11\"";
  svg += "<text x=\"" + fixed(left) + "\" y=\"" + fixed(top + h + 16) + "\" " + font + ">" +
         label(rx.lo) + "</text>\n";
  svg += "<text x=\"" + fixed(left + w) + "\" y=\"" + fixed(top + h + 16) +
         "\" text-anchor=\"end\" " + font + ">" + label(rx.hi) + "</text>\n";
  svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(top + h) + "\" text-anchor=\"end\" " +
         font + ">" + label(ry.lo) + "</text>\n";
  svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(top + 10) + "\" text-anchor=\"end\" " +
         font + ">" + label(ry.hi) + "</text>\n";
  const std::string x_name = options.mode == PlotMode::kPhase
                                 ? columns[0]
                                 : (table.find(options.x_column) ? options.x_column : "row");
  svg += "<text x=\"" + fixed(left + w / 2) + "\" y=\"" + fixed(top + h + 36) +
         "\" text-anchor=\"middle\" " + font + ">" + escape(x_name) + "</text>\n";

  for (std::size_t s = 0; s < ys.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    std::string points;
    for (std::size_t i = 0; i < x->size(); ++i) {
      const double xv = (*x)[i], yv = (*ys[s])[i];
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      if (!points.empty()) points += ' ';
      points += fixed(px(xv)) + "," + fixed(py(yv));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1\" points=\"" + points + "\"/>\n";
    svg += "<text x=\"" + fixed(left + 8) + "\" y=\"" + fixed(top + 16 + 14 * static_cast<double>(s)) +
           "\" fill=\"" + color + "\" " + font + ">" + escape(names[s]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& out_svg, const PlotOptions& options) {
  const Table table = read_csv(csv_path);
  const std::string svg = render_svg(table, columns, options);
  std::ofstream out(out_svg, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kMissingFile, "cannot write '" + out_svg + "'");
  out << svg;
}

}  // namespace hesn
