#include "hesn/config.hpp"

#include "hesn/error.hpp"
#include "hesn/text.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

namespace hesn {

namespace {

// Thrown by field setters; the caller prefixes the location.
struct BadValue {
  std::string message;
};

double as_double(std::string_view v) {
  double d = 0.0;
  if (!parse_double(v, d) || !std::isfinite(d))
    throw BadValue{"expected a number, found '" + std::string(v) + "'"};
  return d;
}

long as_long(std::string_view v) {
  long n = 0;
  if (!parse_long(v, n)) throw BadValue{"expected an integer, found '" + std::string(v) + "'"};
  return n;
}

bool as_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw BadValue{"expected true or false, found '" + std::string(v) + "'"};
}

void check(bool ok, const std::string& requirement) {
  if (!ok) throw BadValue{"must be " + requirement};
}

template <typename T>
std::vector<T> as_list(std::string_view v, T (*one)(std::string_view)) {
  std::vector<T> out;
  for (const auto& item : split(v, ',')) out.push_back(one(trim(item)));
  if (out.empty()) throw BadValue{"expected a comma-separated list"};
  return out;
}

double list_double(std::string_view v) { return as_double(v); }
int list_int(std::string_view v) {
  const long n = as_long(v);
  check(n >= 1 && n <= 1000, "positive");
  return static_cast<int>(n);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += format_double(values[i]);
    else out += std::to_string(values[i]);
  }
  return out;
}

struct Field {
  std::string key;
  std::string description;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define HESN_NUMBER(KEY, DESC, MEMBER, COND, REQ)                                    \
  Field {                                                                            \
    KEY, DESC,                                                                       \
        [](ExperimentConfig& c, std::string_view v) {                                \
          const double x = as_double(v);                                             \
          check(COND, REQ);                                                          \
          c.MEMBER = x;                                                              \
        },                                                                           \
        [](const ExperimentConfig& c) { return format_double(c.MEMBER); }            \
  }

#define HESN_INTEGER(KEY, DESC, MEMBER, TYPE, COND, REQ)                             \
  Field {                                                                            \
    KEY, DESC,                                                                       \
        [](ExperimentConfig& c, std::string_view v) {                                \
          const long x = as_long(v);                                                 \
          check(COND, REQ);                                                          \
          c.MEMBER = static_cast<TYPE>(x);                                           \
        },                                                                           \
        [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }           \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      HESN_INTEGER("model.n_modes", "Galerkin modes N_g of the truth model", protocol.model.n_modes,
                   int, x >= 1 && x <= 1000, "in [1, 1000]"),
      HESN_NUMBER("model.beta", "heat-release intensity", protocol.model.beta, x >= 0.0, ">= 0"),
      HESN_NUMBER("model.tau", "time delay", protocol.model.tau, x > 0.0, "> 0"),
      HESN_NUMBER("model.x_f", "heat source location", protocol.model.x_f, x > 0.0 && x < 1.0,
                  "in (0, 1)"),
      HESN_NUMBER("model.damping_c1", "damping c1 in zeta_j = c1 j^p + c2 sqrt(j)",
                  protocol.model.damping_c1, x >= 0.0, ">= 0"),
      HESN_NUMBER("model.damping_c2", "damping c2", protocol.model.damping_c2, x >= 0.0, ">= 0"),
      HESN_NUMBER("model.damping_power", "damping exponent p", protocol.model.damping_power,
                  x >= 0.0, ">= 0"),
      Field{"model.king_law", "absolute (sqrt|1+u_f|) or clamped (sqrt max(1+u_f, 0))",
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "absolute") c.protocol.model.king_law = KingLaw::kAbsolute;
              else if (v == "clamped") c.protocol.model.king_law = KingLaw::kClamped;
              else throw BadValue{"expected absolute or clamped, found '" + std::string(v) + "'"};
            },
            [](const ExperimentConfig& c) {
              return std::string(c.protocol.model.king_law == KingLaw::kAbsolute ? "absolute"
                                                                                 : "clamped");
            }},
      HESN_NUMBER("sim.dt", "sampling interval and integrator step", protocol.dt, x > 0.0, "> 0"),
      HESN_NUMBER("sim.transient", "time discarded before recording", protocol.transient, x >= 0.0,
                  ">= 0"),
      HESN_NUMBER("sim.reference_time", "span of the reference average", protocol.reference_time,
                  x > 0.0, "> 0"),
      HESN_NUMBER("sim.blowup_bound", "largest allowed state magnitude",
                  protocol.integrator.blowup_bound, x > 0.0, "> 0"),
      HESN_NUMBER("sim.duration", "time units written by simulate", simulate_duration, x > 0.0,
                  "> 0"),
      HESN_INTEGER("esn.n_reservoir", "reservoir neurons N_x", esn.n_reservoir, int,
                   x >= 2 && x <= 100000, "in [2, 100000]"),
      HESN_NUMBER("esn.sigma_in", "input weight half-range", esn.sigma_in, x > 0.0, "> 0"),
      HESN_NUMBER("esn.spectral_radius", "spectral radius of W for the plain ESN",
                  esn.spectral_radius, x > 0.0, "> 0"),
      HESN_NUMBER("esn.density", "fraction of nonzero W entries", esn.density, x > 0.0 && x <= 1.0,
                  "in (0, 1]"),
      HESN_NUMBER("esn.gamma", "ridge factor", esn.gamma, x >= 0.0, ">= 0"),
      HESN_INTEGER("esn.washout", "teacher-forced steps discarded before regression", esn.washout,
                   int, x >= 0, ">= 0"),
      HESN_INTEGER("esn.seed", "reservoir seed for single runs", esn.seed, std::uint64_t, x >= 0,
                   ">= 0"),
      Field{"esn.input_connectivity",
            "one_per_row (each neuron reads one input) or dense (each neuron reads its whole block)",
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "one_per_row") c.esn.input_connectivity = InputConnectivity::kOnePerRow;
              else if (v == "dense") c.esn.input_connectivity = InputConnectivity::kDense;
              else throw BadValue{"expected one_per_row or dense, found '" + std::string(v) + "'"};
            },
            [](const ExperimentConfig& c) {
              return std::string(c.esn.input_connectivity == InputConnectivity::kOnePerRow
                                     ? "one_per_row"
                                     : "dense");
            }},
      Field{"esn.normalize_inputs", "divide inputs by the largest training magnitude",
            [](ExperimentConfig& c, std::string_view v) { c.protocol.normalize_inputs = as_bool(v); },
            [](const ExperimentConfig& c) {
              return std::string(c.protocol.normalize_inputs ? "true" : "false");
            }},
      HESN_NUMBER("hesn.spectral_radius", "spectral radius of W for the hybrid ESN",
                  hesn_spectral_radius, x > 0.0, "> 0"),
      Field{"hesn.delay_source",
            "full_input (flame velocity of the whole input) or projected (of the ROM modes only)",
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "full_input") c.protocol.rom_delay_source = RomDelaySource::kFullInput;
              else if (v == "projected") c.protocol.rom_delay_source = RomDelaySource::kProjected;
              else throw BadValue{"expected full_input or projected, found '" + std::string(v) + "'"};
            },
            [](const ExperimentConfig& c) {
              return std::string(c.protocol.rom_delay_source == RomDelaySource::kFullInput
                                     ? "full_input"
                                     : "projected");
            }},
      Field{"experiment.mode", "predictor: esn, hesn or rom",
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "esn") c.mode = PredictorKind::kEsn;
              else if (v == "hesn") c.mode = PredictorKind::kHesn;
              else if (v == "rom") c.mode = PredictorKind::kRom;
              else throw BadValue{"expected esn, hesn or rom, found '" + std::string(v) + "'"};
            },
            [](const ExperimentConfig& c) { return predictor_name(c.mode); }},
      HESN_INTEGER("experiment.rom_ng", "Galerkin modes of the ROM", rom_ng, int, x >= 1, ">= 1"),
      HESN_INTEGER("experiment.train_samples", "training samples N_t", protocol.train_samples,
                   long, x >= 2, ">= 2"),
      HESN_NUMBER("experiment.horizon", "closed-loop prediction length", protocol.horizon, x > 0.0,
                  "> 0"),
      HESN_INTEGER("experiment.warmup", "teacher-forced samples before closed loop",
                   protocol.warmup, long, x >= 1, ">= 1"),
      HESN_NUMBER("experiment.prediction_discard", "prediction time skipped by the average",
                  protocol.prediction_discard, x >= 0.0, ">= 0"),
      HESN_INTEGER("experiment.seeds", "reservoir realizations per evaluation", seeds, int,
                   x >= 1 && x <= 100000, "in [1, 100000]"),
      HESN_INTEGER("experiment.base_seed", "first seed; realizations use base_seed + k", base_seed,
                   std::uint64_t, x >= 0, ">= 0"),
      HESN_INTEGER("experiment.workers", "worker threads", workers, int, x >= 1 && x <= 1024,
                   "in [1, 1024]"),
      Field{"sweep.rom_ng", "ROM sizes for sweep-ng",
            [](ExperimentConfig& c, std::string_view v) { c.sweep_rom_ng = as_list<int>(v, list_int); },
            [](const ExperimentConfig& c) { return join(c.sweep_rom_ng); }},
      Field{"grid.sigma_in", "sigma_in values for grid-search",
            [](ExperimentConfig& c, std::string_view v) {
              c.grid.sigma_in = as_list<double>(v, list_double);
              for (double x : c.grid.sigma_in) check(x > 0.0, "> 0");
            },
            [](const ExperimentConfig& c) { return join(c.grid.sigma_in); }},
      Field{"grid.spectral_radius", "spectral radius values for grid-search",
            [](ExperimentConfig& c, std::string_view v) {
              c.grid.spectral_radius = as_list<double>(v, list_double);
              for (double x : c.grid.spectral_radius) check(x > 0.0, "> 0");
            },
            [](const ExperimentConfig& c) { return join(c.grid.spectral_radius); }},
      Field{"grid.gamma", "ridge factors for grid-search",
            [](ExperimentConfig& c, std::string_view v) {
              c.grid.gamma = as_list<double>(v, list_double);
              for (double x : c.grid.gamma) check(x >= 0.0, ">= 0");
            },
            [](const ExperimentConfig& c) { return join(c.grid.gamma); }},
      HESN_NUMBER("grid.validation_time", "validation span after the training data",
                  protocol.validation_time, x > 0.0, "> 0"),
      HESN_NUMBER("lyapunov.t_total", "integration time for the exponent", lyapunov.t_total,
                  x > 0.0, "> 0"),
      HESN_NUMBER("lyapunov.renorm_interval", "time between renormalizations",
                  lyapunov.renorm_interval, x > 0.0, "> 0"),
      HESN_NUMBER("lyapunov.transient", "time before the perturbation is introduced",
                  lyapunov.transient, x >= 0.0, ">= 0"),
      HESN_INTEGER("lyapunov.seed", "perturbation direction seed", lyapunov.seed, std::uint64_t,
                   x >= 0, ">= 0"),
      Field{"paths.data", "truth CSV used by train/predict/evaluate (generated when empty)",
            [](ExperimentConfig& c, std::string_view v) { c.paths.data = std::string(v); },
            [](const ExperimentConfig& c) { return c.paths.data; }},
      Field{"paths.checkpoint", "checkpoint written by train and read by predict",
            [](ExperimentConfig& c, std::string_view v) { c.paths.checkpoint = std::string(v); },
            [](const ExperimentConfig& c) { return c.paths.checkpoint; }},
      Field{"paths.output", "output file (default depends on the subcommand)",
            [](ExperimentConfig& c, std::string_view v) { c.paths.output = std::string(v); },
            [](const ExperimentConfig& c) { return c.paths.output; }},
  };
  return table;
}

#undef HESN_NUMBER
#undef HESN_INTEGER

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

void assign(ExperimentConfig& config, std::string_view key, std::string_view value,
            const std::string& where) {
  const Field* f = find_field(key);
  if (!f) fail(ErrorCode::kConfigParse, where + ": unknown key '" + std::string(key) + "'");
  try {
    f->set(config, value);
  } catch (const BadValue& e) {
    fail(ErrorCode::kConfigParse, where + ": " + std::string(key) + " " + e.message);
  }
}

}  // namespace

EsnConfig ExperimentConfig::esn_for(PredictorKind kind) const {
  EsnConfig c = esn;
  if (kind == PredictorKind::kHesn) c.spectral_radius = hesn_spectral_radius;
  return c;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& m) { fail(ErrorCode::kConfigParse, m); };
  try {
    protocol.validate();
    esn.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  if (mode == PredictorKind::kHesn || mode == PredictorKind::kRom)
    if (rom_ng < 1 || rom_ng > protocol.model.n_modes)
      bad("experiment.rom_ng must lie in [1, model.n_modes]");
  for (int ng : sweep_rom_ng)
    if (ng > protocol.model.n_modes) bad("sweep.rom_ng entries must not exceed model.n_modes");
  if (protocol.model.tau < protocol.dt) bad("model.tau must be >= sim.dt");
  if (esn.washout + 2 > protocol.train_samples)
    bad("esn.washout must be at most experiment.train_samples - 2");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& f : fields()) out.push_back({f.key, f.description});
    return out;
  }();
  return keys;
}

void apply_config_text(ExperimentConfig& config, const std::string& text,
                       const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::kConfigParse, where + ": expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key.empty()) fail(ErrorCode::kConfigParse, where + ": missing key");
    assign(config, key, value, where);
  }
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kMissingFile, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig config;
  apply_config_text(config, ss.str(), path);
  return config;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    fail(ErrorCode::kConfigParse, "--set '" + assignment + "': expected key=value");
  assign(config, trim(std::string_view(assignment).substr(0, eq)),
         trim(std::string_view(assignment).substr(eq + 1)), "--set");
}

std::string config_value(const ExperimentConfig& config, const std::string& key) {
  const Field* f = find_field(key);
  require(f != nullptr, ErrorCode::kConfigParse, "unknown key '" + key + "'");
  return f->get(config);
}

std::string dump_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  // Paths and worker count do not change any result.
  std::string canonical;
  for (const auto& f : fields())
    if (f.key.rfind("paths.", 0) != 0 && f.key != "experiment.workers")
      canonical += f.key + " = " + f.get(config) + "\n";
  return fnv1a_hex(canonical);
}

}  // namespace hesn
