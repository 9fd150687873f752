#include "hesn/csv.hpp"

#include "hesn/error.hpp"
#include "hesn/galerkin.hpp"
#include "hesn/text.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hesn {

std::optional<std::size_t> Table::find(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

const std::vector<double>& Table::column(const std::string& name) const {
  const auto i = find(name);
  require(i.has_value(), ErrorCode::kInvalidArgument, "missing column '" + name + "'");
  return columns[*i];
}

void Table::add_column(std::string name, std::vector<double> values) {
  require(columns.empty() || values.size() == rows(), ErrorCode::kDimensionMismatch,
          "column '" + name + "' has a different length");
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

Table parse_csv(const std::string& text, const std::string& origin) {
  Table t;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      t.comments.emplace_back(trim(body.substr(1)));
      continue;
    }
    const auto fields = split(body, ',');
    if (t.header.empty()) {
      for (const auto& f : fields) t.header.emplace_back(trim(f));
      t.columns.resize(t.header.size());
      continue;
    }
    require(fields.size() == t.header.size(), ErrorCode::kDimensionMismatch,
            origin + ":" + std::to_string(line_no) + ": expected " +
                std::to_string(t.header.size()) + " fields, found " +
                std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      require(parse_double(fields[c], v), ErrorCode::kInvalidArgument,
              origin + ":" + std::to_string(line_no) + ": '" + fields[c] + "' is not a number");
      t.columns[c].push_back(v);
    }
  }
  require(!t.header.empty(), ErrorCode::kInvalidArgument, origin + ": no header row");
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kMissingFile, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path);
}

std::string format_csv(const Table& table) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  for (std::size_t c = 0; c < table.header.size(); ++c)
    out += (c ? "," : "") + table.header[c];
  out += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kMissingFile, "cannot write '" + path + "'");
  out << format_csv(table);
  require(static_cast<bool>(out), ErrorCode::kMissingFile, "failed writing '" + path + "'");
}

Table series_table(const TimeSeries& series, std::optional<double> x_f) {
  require(series.dim() % 2 == 0, ErrorCode::kDimensionMismatch,
          "state length must be even (eta then mu)");
  const auto n_modes = series.dim() / 2;
  const auto n = static_cast<std::size_t>(series.size());
  Table t;
  std::vector<double> time(n);
  for (std::size_t i = 0; i < n; ++i) time[i] = series.time(static_cast<Eigen::Index>(i));
  t.add_column("t", std::move(time));
  for (int block = 0; block < 2; ++block)
    for (Eigen::Index j = 0; j < n_modes; ++j) {
      const auto row = series.states.row(block * n_modes + j);
      t.add_column((block == 0 ? "eta_" : "mu_") + std::to_string(j + 1),
                   std::vector<double>(row.begin(), row.end()));
    }
  if (x_f) {
    std::vector<double> uf(n);
    for (std::size_t i = 0; i < n; ++i)
      uf[i] = flame_velocity(GalerkinState::unpack(series.states.col(static_cast<Eigen::Index>(i))),
                             *x_f);
    t.add_column("u_f", std::move(uf));
  }
  return t;
}

TimeSeries series_from_table(const Table& table) {
  const auto& time = table.column("t");
  int n_modes = 0;
  while (table.find("eta_" + std::to_string(n_modes + 1))) ++n_modes;
  require(n_modes >= 1, ErrorCode::kDimensionMismatch, "no eta_1 column");
  require(time.size() >= 1, ErrorCode::kInsufficientData, "series has no rows");
  TimeSeries s;
  s.t0 = time.front();
  if (time.size() >= 2) s.dt = (time.back() - time.front()) / static_cast<double>(time.size() - 1);
  require(s.dt > 0.0, ErrorCode::kInvalidArgument, "time column must increase");
  for (std::size_t i = 1; i < time.size(); ++i)
    require(std::abs(time[i] - time[i - 1] - s.dt) <= 1e-6 * s.dt, ErrorCode::kInvalidArgument,
            "time column is not uniformly spaced");
  s.states.resize(2 * n_modes, static_cast<Eigen::Index>(time.size()));
  for (int block = 0; block < 2; ++block)
    for (int j = 0; j < n_modes; ++j) {
      const auto& col = table.column((block == 0 ? "eta_" : "mu_") + std::to_string(j + 1));
      for (std::size_t i = 0; i < col.size(); ++i)
        s.states(block * n_modes + j, static_cast<Eigen::Index>(i)) = col[i];
    }
  return s;
}

}  // namespace hesn
