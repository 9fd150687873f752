#include "hesn/checkpoint.hpp"

#include "hesn/error.hpp"
#include "hesn/text.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace hesn {

namespace {

const char* king_law_name(KingLaw law) { return law == KingLaw::kAbsolute ? "absolute" : "clamped"; }
const char* source_name(RomDelaySource s) {
  return s == RomDelaySource::kFullInput ? "full_input" : "projected";
}

// Reads whitespace-separated tokens and reports the line of any malformed one.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string l;
    while (std::getline(in_, l)) {
      ++line_no_;
      const auto t = trim(l);
      if (t.empty()) continue;
      if (t.front() == '#') {
        comments_.emplace_back(trim(t.substr(1)));
        continue;
      }
      return std::string(t);
    }
    fail(ErrorCode::kConfigParse, "checkpoint ended early after line " + std::to_string(line_no_));
  }

  std::vector<std::string> tokens() {
    std::istringstream ss(line());
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
  }

  double number(const std::string& tok) {
    double v = 0.0;
    if (!parse_double(tok, v)) bad("'" + tok + "' is not a number");
    return v;
  }

  long integer(const std::string& tok) {
    long v = 0;
    if (!parse_long(tok, v)) bad("'" + tok + "' is not an integer");
    return v;
  }

  void expect(const std::string& keyword) {
    const auto l = line();
    if (l != keyword) bad("expected '" + keyword + "', found '" + l + "'");
  }

  std::vector<double> row(std::size_t n) {
    const auto t = tokens();
    if (t.size() != n) bad("expected " + std::to_string(n) + " values, found " + std::to_string(t.size()));
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = number(t[i]);
    return v;
  }

  [[noreturn]] void bad(const std::string& msg) const {
    fail(ErrorCode::kConfigParse, "checkpoint line " + std::to_string(line_no_) + ": " + msg);
  }

  bool at_end() {
    std::string l;
    while (in_.peek() != EOF) {
      std::streampos pos = in_.tellg();
      if (!std::getline(in_, l)) break;
      const auto t = trim(l);
      ++line_no_;
      if (t.empty()) continue;
      if (t.front() == '#') {
        comments_.emplace_back(trim(t.substr(1)));
        continue;
      }
      in_.seekg(pos);
      --line_no_;
      return false;
    }
    return true;
  }

  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::istream& in_;
  long line_no_ = 0;
  std::vector<std::string> comments_;
};

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_double(m(r, c));
    out << '\n';
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const Reservoir& reservoir,
                      const std::optional<RomSection>& rom, const std::string& manifest) {
  const auto& w_in = reservoir.w_in();
  const auto& w = reservoir.w();
  const Eigen::MatrixXd& w_out = reservoir.w_out();
  out << "ESN v1\n";
  out << reservoir.n_reservoir() << ' ' << reservoir.n_inputs() << ' ' << w_out.rows() << ' '
      << w_out.cols() << '\n';
  out << "W_IN\n";
  write_matrix(out, w_in);
  out << "W " << w.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < w.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(w, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
  out << "W_OUT\n";
  write_matrix(out, w_out);
  if (rom) {
    const auto& p = rom->params;
    out << "ROM\n";
    out << "n_modes " << p.n_modes << '\n';
    out << "beta " << format_double(p.beta) << '\n';
    out << "tau " << format_double(p.tau) << '\n';
    out << "x_f " << format_double(p.x_f) << '\n';
    out << "damping " << format_double(p.damping_c1) << ' ' << format_double(p.damping_c2) << ' '
        << format_double(p.damping_power) << '\n';
    out << "king_law " << king_law_name(p.king_law) << '\n';
    out << "full_dim " << rom->full_dim << '\n';
    out << "dt " << format_double(rom->dt) << '\n';
    out << "delay_source " << source_name(rom->source) << '\n';
    out << "partition " << rom->partition.size() << '\n';
    for (const auto& b : rom->partition)
      out << b.row_begin << ' ' << b.row_end << ' ' << b.col_begin << ' ' << b.col_end << '\n';
    out << "END_ROM\n";
  }
  if (!manifest.empty()) out << "# manifest: " << manifest << '\n';
}

Checkpoint read_checkpoint(std::istream& in) {
  Reader rd(in);
  rd.expect("ESN v1");
  const auto dims = rd.tokens();
  if (dims.size() != 4) rd.bad("expected 'Nx Nu Ny Nf'");
  const long nx = rd.integer(dims[0]), nu = rd.integer(dims[1]), ny = rd.integer(dims[2]),
             nf = rd.integer(dims[3]);
  if (nx < 1 || nu < 1 || ny < 0 || nf < 0) rd.bad("dimensions must be positive");

  rd.expect("W_IN");
  Eigen::MatrixXd w_in(nx, nu);
  for (long r = 0; r < nx; ++r) {
    const auto v = rd.row(static_cast<std::size_t>(nu));
    for (long c = 0; c < nu; ++c) w_in(r, c) = v[static_cast<std::size_t>(c)];
  }

  const auto w_head = rd.tokens();
  if (w_head.size() != 2 || w_head[0] != "W") rd.bad("expected 'W nnz'");
  const long nnz = rd.integer(w_head[1]);
  if (nnz < 0 || nnz > nx * nx) rd.bad("bad nonzero count");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    const auto t = rd.tokens();
    if (t.size() != 3) rd.bad("expected 'row col value'");
    const long r = rd.integer(t[0]), c = rd.integer(t[1]);
    if (r < 0 || r >= nx || c < 0 || c >= nx) rd.bad("W index out of range");
    trips.emplace_back(static_cast<int>(r), static_cast<int>(c), rd.number(t[2]));
  }
  SparseMatrix w(nx, nx);
  w.setFromTriplets(trips.begin(), trips.end());

  rd.expect("W_OUT");
  Eigen::MatrixXd w_out(ny, nf);
  for (long r = 0; r < ny; ++r) {
    const auto v = rd.row(static_cast<std::size_t>(nf));
    for (long c = 0; c < nf; ++c) w_out(r, c) = v[static_cast<std::size_t>(c)];
  }

  Checkpoint cp{Reservoir(std::move(w_in), std::move(w)), std::nullopt, {}};
  if (w_out.size() > 0) cp.reservoir.set_readout(std::move(w_out));

  if (!rd.at_end()) {
    rd.expect("ROM");
    RomSection rom;
    auto field = [&](const std::string& key, std::size_t n) {
      auto t = rd.tokens();
      if (t.size() != n + 1 || t[0] != key) rd.bad("expected '" + key + "'");
      t.erase(t.begin());
      return t;
    };
    rom.params.n_modes = static_cast<int>(rd.integer(field("n_modes", 1)[0]));
    rom.params.beta = rd.number(field("beta", 1)[0]);
    rom.params.tau = rd.number(field("tau", 1)[0]);
    rom.params.x_f = rd.number(field("x_f", 1)[0]);
    const auto damping = field("damping", 3);
    rom.params.damping_c1 = rd.number(damping[0]);
    rom.params.damping_c2 = rd.number(damping[1]);
    rom.params.damping_power = rd.number(damping[2]);
    const auto law = field("king_law", 1)[0];
    if (law == "absolute") rom.params.king_law = KingLaw::kAbsolute;
    else if (law == "clamped") rom.params.king_law = KingLaw::kClamped;
    else rd.bad("unknown king_law '" + law + "'");
    rom.full_dim = static_cast<int>(rd.integer(field("full_dim", 1)[0]));
    rom.dt = rd.number(field("dt", 1)[0]);
    const auto src = field("delay_source", 1)[0];
    if (src == "full_input") rom.source = RomDelaySource::kFullInput;
    else if (src == "projected") rom.source = RomDelaySource::kProjected;
    else rd.bad("unknown delay_source '" + src + "'");
    const long blocks = rd.integer(field("partition", 1)[0]);
    if (blocks < 1 || blocks > nx) rd.bad("bad partition block count");
    for (long b = 0; b < blocks; ++b) {
      const auto t = rd.tokens();
      if (t.size() != 4) rd.bad("expected 'row_begin row_end col_begin col_end'");
      rom.partition.push_back({static_cast<int>(rd.integer(t[0])), static_cast<int>(rd.integer(t[1])),
                               static_cast<int>(rd.integer(t[2])), static_cast<int>(rd.integer(t[3]))});
    }
    rd.expect("END_ROM");
    validate_partition(rom.partition, static_cast<int>(nx), static_cast<int>(nu));
    cp.rom = rom;
    rd.at_end();
  }
  for (const auto& c : rd.comments())
    if (c.rfind("manifest:", 0) == 0) cp.manifest = std::string(trim(std::string_view(c).substr(9)));
  return cp;
}

HybridEsn Checkpoint::hybrid() const {
  require(rom.has_value(), ErrorCode::kDimensionMismatch, "checkpoint has no ROM section");
  HybridEsn model(reservoir, rom->params, rom->full_dim, rom->dt, rom->source);
  const auto expected = model.partition();
  require(expected.size() == rom->partition.size(), ErrorCode::kDimensionMismatch,
          "checkpoint partition does not match the hybrid layout");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& a = expected[i];
    const auto& b = rom->partition[i];
    require(a.row_begin == b.row_begin && a.row_end == b.row_end && a.col_begin == b.col_begin &&
                a.col_end == b.col_end,
            ErrorCode::kDimensionMismatch, "checkpoint partition does not match the hybrid layout");
  }
  return model;
}

RomSection rom_section(const HybridEsn& model) {
  return {model.rom_params(), model.full_dim(), model.dt(), model.delay_source(), model.partition()};
}

void save_checkpoint(const std::string& path, const Reservoir& reservoir,
                     const std::optional<RomSection>& rom, const std::string& manifest) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kMissingFile, "cannot write '" + path + "'");
  write_checkpoint(out, reservoir, rom, manifest);
  require(static_cast<bool>(out), ErrorCode::kMissingFile, "failed writing '" + path + "'");
}

void save_checkpoint(const std::string& path, const HybridEsn& model, const std::string& manifest) {
  save_checkpoint(path, model.reservoir(), rom_section(model), manifest);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kMissingFile, "cannot open '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace hesn
