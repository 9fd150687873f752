#pragma once

#include "hesn/evaluation.hpp"
#include "hesn/galerkin.hpp"
#include "hesn/hybrid.hpp"
#include "hesn/integrator.hpp"
#include "hesn/reservoir.hpp"
#include "hesn/time_series.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hesn {

enum class PredictorKind { kEsn, kHesn, kRom };

std::string predictor_name(PredictorKind kind);
PredictorKind parse_predictor(const std::string& name);

/// Data generation and train/predict protocol shared by every predictor.
struct Protocol {
  ModelParams model;
  double dt = 0.01;
  double transient = 200.0;        // discarded before any recorded sample
  double reference_time = 1000.0;  // span of the reference average
  long train_samples = 5000;
  double horizon = 250.0;          // closed-loop prediction length
  long warmup = 100;               // teacher-forced samples before closed loop
  double prediction_discard = 0.0;
  double validation_time = 50.0;   // grid-search segment after the training data
  bool normalize_inputs = true;    // divide inputs by max |training sample|
  RomDelaySource rom_delay_source = RomDelaySource::kFullInput;
  IntegratorOptions integrator;

  long prediction_steps() const;
  long validation_steps() const;
  void validate() const;
};

struct TruthData {
  TimeSeries train;   // train_samples samples
  TimeSeries future;  // the prediction_steps() samples that follow
  double reference_average = 0.0;
  double input_scale = 1.0;  // max |train| when normalizing, else 1

  /// The last `warmup` training samples.
  TimeSeries warmup(long n) const;
};

/// One long trajectory from eta_1 = 1 and a zero history. After the transient,
/// the first reference_time units give the reference average, the first
/// train_samples samples the training set, and the following samples the
/// future the predictors are compared against.
TruthData prepare_truth(const Protocol& protocol);

/// Fills in the input/output sizes (and input scale) for a predictor kind.
EsnConfig configure_esn(EsnConfig esn, PredictorKind kind, int full_dim, double input_scale);

/// ROM parameters: the truth model truncated to rom_ng modes.
ModelParams rom_params(const Protocol& protocol, int rom_ng);

/// Trains on the truth training set, warms up on its last samples and runs n
/// closed-loop steps. The first output sample predicts truth.future's first.
TimeSeries train_and_predict(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                             const EsnConfig& esn, int rom_ng, long n_steps);

/// Train and predict for one seed; failures are captured, not thrown.
SeedResult evaluate_seed(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                         EsnConfig esn, int rom_ng, std::uint64_t seed);

/// Seeds base_seed .. base_seed + n_seeds - 1 (one run for the deterministic ROM).
EvalReport evaluate(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                    const EsnConfig& esn, int rom_ng, int n_seeds, std::uint64_t base_seed,
                    int workers);

struct NgRow {
  int rom_ng = 0;
  std::vector<SeedResult> per_seed;
  SeedSummary summary;
};

/// hESN errors for each ROM size, one row per entry of rom_ng_values.
std::vector<NgRow> ng_sweep(const Protocol& protocol, const TruthData& truth,
                            const EsnConfig& esn, const std::vector<int>& rom_ng_values,
                            int n_seeds, std::uint64_t base_seed, int workers);

struct GridSpec {
  std::vector<double> sigma_in;
  std::vector<double> spectral_radius;
  std::vector<double> gamma;
};

struct GridCell {
  double sigma_in = 0.0;
  double spectral_radius = 0.0;
  double gamma = 0.0;
  double objective = 0.0;  // +inf when the evaluation failed
  std::string error;
};

struct GridResult {
  std::vector<GridCell> table;  // Cartesian product, sigma_in outermost
  std::size_t best = 0;
};

using GridObjective = std::function<double(const EsnConfig&)>;

/// Exhaustive search; the argmin breaks ties by ascending (sigma_in, rho, gamma).
GridResult grid_search(const GridSpec& grid, const EsnConfig& base, const GridObjective& objective,
                       int workers);

/// Relative error of the average observable over the validation segment that
/// follows the training data.
GridObjective validation_objective(const Protocol& protocol, const TruthData& truth,
                                   PredictorKind kind, int rom_ng);

}  // namespace hesn
