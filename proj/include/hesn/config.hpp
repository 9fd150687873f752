#pragma once

#include "hesn/experiment.hpp"
#include "hesn/reservoir.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hesn {

struct Paths {
  std::string data;        // truth CSV to train on; generated when empty
  std::string checkpoint = "model.ckpt";
  std::string output;      // per-subcommand default when empty
};

struct LyapunovConfig {
  double t_total = 2000.0;
  double renorm_interval = 1.0;
  double transient = 200.0;
  std::uint64_t seed = 0;
};

/// Everything a run needs. Defaults are the reference experiment.
struct ExperimentConfig {
  Protocol protocol;
  EsnConfig esn;                     // esn.spectral_radius applies to the plain ESN
  double hesn_spectral_radius = 0.3;
  PredictorKind mode = PredictorKind::kHesn;
  int rom_ng = 1;
  int seeds = 16;
  std::uint64_t base_seed = 0;
  int workers = 1;
  double simulate_duration = 300.0;  // time units written by `simulate`
  std::vector<int> sweep_rom_ng{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  GridSpec grid{{0.01, 0.03, 0.1, 0.2}, {0.1, 0.3}, {1e-7}};
  LyapunovConfig lyapunov;
  Paths paths;

  /// The reservoir configuration for a predictor kind (spectral radius differs).
  EsnConfig esn_for(PredictorKind kind) const;
  void validate() const;
};

struct ConfigKey {
  std::string key;
  std::string description;
};

/// Every accepted key with its description, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// `key = value` lines; '#' starts a comment. Unknown keys, malformed values
/// and out-of-range values throw kConfigParse naming the line.
void apply_config_text(ExperimentConfig& config, const std::string& text,
                       const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::string& path);
/// One `key=value` override (from the command line).
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Current value of a key in config-file syntax.
std::string config_value(const ExperimentConfig& config, const std::string& key);
/// All keys as `key = value` lines; the canonical form hashed into manifests.
std::string dump_config(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

}  // namespace hesn
