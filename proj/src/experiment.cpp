#include "hesn/experiment.hpp"

#include "hesn/error.hpp"
#include "hesn/parallel.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace hesn {

namespace {

long steps_for(double span, double dt) { return std::lround(span / dt); }

}  // namespace

std::string predictor_name(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kEsn: return "esn";
    case PredictorKind::kHesn: return "hesn";
    case PredictorKind::kRom: return "rom";
  }
  return "?";
}

PredictorKind parse_predictor(const std::string& name) {
  if (name == "esn") return PredictorKind::kEsn;
  if (name == "hesn") return PredictorKind::kHesn;
  if (name == "rom") return PredictorKind::kRom;
  fail(ErrorCode::kInvalidArgument, "unknown predictor '" + name + "' (esn, hesn or rom)");
}

long Protocol::prediction_steps() const { return steps_for(horizon, dt); }
long Protocol::validation_steps() const { return steps_for(validation_time, dt); }

void Protocol::validate() const {
  model.validate();
  auto bad = [](const std::string& m) { fail(ErrorCode::kInvalidArgument, m); };
  if (!(dt > 0.0)) bad("sim.dt must be > 0");
  if (!(transient >= 0.0)) bad("sim.transient must be >= 0");
  if (!(reference_time > 0.0)) bad("sim.reference_time must be > 0");
  if (train_samples < 2) bad("experiment.train_samples must be >= 2");
  if (!(horizon > 0.0)) bad("experiment.horizon must be > 0");
  if (warmup < 1 || warmup > train_samples) bad("experiment.warmup must lie in [1, train_samples]");
  if (!(prediction_discard >= 0.0) || prediction_discard >= horizon)
    bad("experiment.prediction_discard must lie in [0, horizon)");
  if (!(validation_time > 0.0)) bad("grid.validation_time must be > 0");
}

TimeSeries TruthData::warmup(long n) const {
  require(n >= 1 && n <= train.size(), ErrorCode::kInsufficientData,
          "warmup of " + std::to_string(n) + " samples exceeds the training set");
  return train.slice(train.size() - n, n);
}

TruthData prepare_truth(const Protocol& protocol) {
  protocol.validate();
  const long n_ref = steps_for(protocol.reference_time, protocol.dt) + 1;
  const long n_pred = std::max(protocol.prediction_steps(), protocol.validation_steps());
  const long n_total = std::max(n_ref, protocol.train_samples + n_pred);
  const TimeSeries all = generate_trajectory(protocol.model, protocol.dt, protocol.transient,
                                             n_total, protocol.integrator);
  TruthData truth;
  truth.reference_average = time_average(all.slice(0, n_ref), acoustic_energy_observable());
  truth.train = all.slice(0, protocol.train_samples);
  truth.future = all.slice(protocol.train_samples, n_pred);
  truth.input_scale =
      protocol.normalize_inputs ? truth.train.states.cwiseAbs().maxCoeff() : 1.0;
  if (!(truth.input_scale > 0.0)) truth.input_scale = 1.0;
  return truth;
}

EsnConfig configure_esn(EsnConfig esn, PredictorKind kind, int full_dim, double input_scale) {
  esn.n_inputs = kind == PredictorKind::kHesn ? 2 * full_dim : full_dim;
  esn.n_outputs = full_dim;
  esn.input_scale = input_scale;
  return esn;
}

ModelParams rom_params(const Protocol& protocol, int rom_ng) {
  require(rom_ng >= 1 && rom_ng <= protocol.model.n_modes, ErrorCode::kInvalidArgument,
          "rom_ng must lie in [1, model.n_modes]");
  ModelParams p = protocol.model;
  p.n_modes = rom_ng;
  return p;
}

TimeSeries train_and_predict(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                             const EsnConfig& esn, int rom_ng, long n_steps) {
  const int full_dim = static_cast<int>(truth.train.dim());
  const TimeSeries warm = truth.warmup(protocol.warmup);
  switch (kind) {
    case PredictorKind::kRom:
      return rom_predict(rom_params(protocol, rom_ng), warm, n_steps, protocol.rom_delay_source);
    case PredictorKind::kEsn: {
      const EsnConfig cfg = configure_esn(esn, kind, full_dim, truth.input_scale);
      Reservoir res = init_reservoir(cfg);
      train_esn(res, truth.train, cfg.washout, cfg.gamma);
      return predict_closed_loop(res, warm, n_steps);
    }
    case PredictorKind::kHesn: {
      const EsnConfig cfg = configure_esn(esn, kind, full_dim, truth.input_scale);
      HybridTraining trained =
          hesn_train(truth.train, cfg, rom_params(protocol, rom_ng), protocol.rom_delay_source);
      return hesn_predict(trained.model, warm, n_steps);
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown predictor kind");
}

SeedResult evaluate_seed(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                         EsnConfig esn, int rom_ng, std::uint64_t seed) {
  SeedResult r;
  r.seed = seed;
  esn.seed = seed;
  try {
    const TimeSeries pred =
        train_and_predict(protocol, truth, kind, esn, rom_ng, protocol.prediction_steps());
    r.predicted_average =
        time_average(pred, acoustic_energy_observable(), protocol.prediction_discard);
    require(std::isfinite(r.predicted_average), ErrorCode::kNumericalBlowup,
            "prediction average is not finite");
    r.relative_error = relative_error(r.predicted_average, truth.reference_average);
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.error = std::string(error_name(e.code())) + ": " + e.what();
    r.relative_error = std::numeric_limits<double>::infinity();
  }
  return r;
}

EvalReport evaluate(const Protocol& protocol, const TruthData& truth, PredictorKind kind,
                    const EsnConfig& esn, int rom_ng, int n_seeds, std::uint64_t base_seed,
                    int workers) {
  require(n_seeds >= 1, ErrorCode::kInvalidArgument, "need at least one seed");
  const int runs = kind == PredictorKind::kRom ? 1 : n_seeds;
  EvalReport report;
  report.predictor = predictor_name(kind);
  report.reference_average = truth.reference_average;
  report.horizon = protocol.horizon;
  report.n_prediction_steps = protocol.prediction_steps();
  report.per_seed.resize(static_cast<std::size_t>(runs));
  parallel_for(report.per_seed.size(), workers, [&](std::size_t i) {
    report.per_seed[i] = evaluate_seed(protocol, truth, kind, esn, rom_ng, base_seed + i);
  });
  const SeedSummary s = summarize(report.per_seed);
  report.valid = s.valid;
  report.median_error = s.median_error;
  report.predicted_average = s.median_predicted_average;
  report.relative_error = s.n_valid > 0
                              ? relative_error(report.predicted_average, report.reference_average)
                              : std::numeric_limits<double>::quiet_NaN();
  return report;
}

std::vector<NgRow> ng_sweep(const Protocol& protocol, const TruthData& truth,
                            const EsnConfig& esn, const std::vector<int>& rom_ng_values,
                            int n_seeds, std::uint64_t base_seed, int workers) {
  require(n_seeds >= 1, ErrorCode::kInvalidArgument, "need at least one seed");
  require(!rom_ng_values.empty(), ErrorCode::kInvalidArgument, "no ROM sizes requested");
  for (int ng : rom_ng_values) rom_params(protocol, ng);
  std::vector<NgRow> rows(rom_ng_values.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].rom_ng = rom_ng_values[r];
    rows[r].per_seed.resize(static_cast<std::size_t>(n_seeds));
  }
  const std::size_t seeds = static_cast<std::size_t>(n_seeds);
  parallel_for(rows.size() * seeds, workers, [&](std::size_t task) {
    NgRow& row = rows[task / seeds];
    row.per_seed[task % seeds] = evaluate_seed(protocol, truth, PredictorKind::kHesn, esn,
                                               row.rom_ng, base_seed + task % seeds);
  });
  for (auto& row : rows) row.summary = summarize(row.per_seed);
  return rows;
}

GridResult grid_search(const GridSpec& grid, const EsnConfig& base, const GridObjective& objective,
                       int workers) {
  require(!grid.sigma_in.empty() && !grid.spectral_radius.empty() && !grid.gamma.empty(),
          ErrorCode::kInvalidArgument, "every grid axis needs at least one value");
  GridResult result;
  for (double s : grid.sigma_in)
    for (double r : grid.spectral_radius)
      for (double g : grid.gamma) result.table.push_back({s, r, g, 0.0, {}});
  parallel_for(result.table.size(), workers, [&](std::size_t i) {
    GridCell& cell = result.table[i];
    EsnConfig cfg = base;
    cfg.sigma_in = cell.sigma_in;
    cfg.spectral_radius = cell.spectral_radius;
    cfg.gamma = cell.gamma;
    try {
      cell.objective = objective(cfg);
      if (!std::isfinite(cell.objective)) {
        cell.error = "objective is not finite";
        cell.objective = std::numeric_limits<double>::infinity();
      }
    } catch (const Error& e) {
      cell.error = std::string(error_name(e.code())) + ": " + e.what();
      cell.objective = std::numeric_limits<double>::infinity();
    }
  });
  auto key = [](const GridCell& c) {
    return std::make_tuple(c.objective, c.sigma_in, c.spectral_radius, c.gamma);
  };
  for (std::size_t i = 1; i < result.table.size(); ++i)
    if (key(result.table[i]) < key(result.table[result.best])) result.best = i;
  return result;
}

GridObjective validation_objective(const Protocol& protocol, const TruthData& truth,
                                   PredictorKind kind, int rom_ng) {
  const long n = protocol.validation_steps();
  require(n >= 1 && n <= truth.future.size(), ErrorCode::kInsufficientData,
          "validation segment is longer than the generated future");
  const double target = time_average(truth.future.slice(0, n), acoustic_energy_observable());
  return [=, &protocol, &truth](const EsnConfig& cfg) {
    const TimeSeries pred = train_and_predict(protocol, truth, kind, cfg, rom_ng, n);
    return relative_error(time_average(pred, acoustic_energy_observable()), target);
  };
}

}  // namespace hesn
