#include "hesn/cli.hpp"

#include "hesn/checkpoint.hpp"
#include "hesn/config.hpp"
#include "hesn/csv.hpp"
#include "hesn/error.hpp"
#include "hesn/experiment.hpp"
#include "hesn/lyapunov.hpp"
#include "hesn/svg_plot.hpp"
#include "hesn/text.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

namespace hesn {

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::string mode;
  int workers = 0;
  long long seed = -1;
  // plot
  std::string plot_csv;
  std::vector<std::string> plot_columns;
  bool plot_phase = false;
  std::string plot_title;
};

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig config = o.config_path.empty() ? ExperimentConfig{} : parse_config(o.config_path);
  for (const auto& s : o.overrides) apply_override(config, s);
  if (!o.mode.empty()) apply_override(config, "experiment.mode=" + o.mode);
  if (o.workers > 0) config.workers = o.workers;
  if (o.seed >= 0) {
    config.esn.seed = static_cast<std::uint64_t>(o.seed);
    config.base_seed = static_cast<std::uint64_t>(o.seed);
  }
  if (!o.output.empty()) config.paths.output = o.output;
  config.validate();
  return config;
}

std::string manifest(const std::string& sub, const ExperimentConfig& config, std::uint64_t seed) {
  return sub + ", " + config_hash(config) + ", " + std::to_string(seed) + ", " + kVersion;
}

std::string output_path(const ExperimentConfig& config, const std::string& fallback) {
  return config.paths.output.empty() ? fallback : config.paths.output;
}

// Truth from paths.data when set (train = first samples, future = the rest,
// reference = average over the whole file), otherwise generated.
TruthData load_truth(const ExperimentConfig& config) {
  if (config.paths.data.empty()) return prepare_truth(config.protocol);
  const TimeSeries all = series_from_table(read_csv(config.paths.data));
  const auto& p = config.protocol;
  require(all.dim() == 2 * p.model.n_modes, ErrorCode::kDimensionMismatch,
          "data has " + std::to_string(all.dim() / 2) + " modes, config expects " +
              std::to_string(p.model.n_modes));
  require(std::abs(all.dt - p.dt) <= 1e-9 * p.dt, ErrorCode::kDimensionMismatch,
          "data sampling interval differs from sim.dt");
  require(all.size() >= p.train_samples, ErrorCode::kInsufficientData,
          "data has fewer than experiment.train_samples samples");
  TruthData truth;
  truth.train = all.slice(0, p.train_samples);
  truth.train.dt = p.dt;
  truth.future = all.slice(p.train_samples, all.size() - p.train_samples);
  truth.future.dt = p.dt;
  truth.reference_average = time_average(all, acoustic_energy_observable());
  truth.input_scale = p.normalize_inputs ? truth.train.states.cwiseAbs().maxCoeff() : 1.0;
  if (!(truth.input_scale > 0.0)) truth.input_scale = 1.0;
  return truth;
}

void write_series(const std::string& path, const TimeSeries& s, const ExperimentConfig& config,
                  const std::string& man, bool with_uf) {
  Table t = series_table(s, with_uf ? std::optional<double>(config.protocol.model.x_f) : std::nullopt);
  t.comments.push_back("manifest: " + man);
  write_csv(path, t);
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const long n = std::lround(c.simulate_duration / c.protocol.dt) + 1;
  TimeSeries s = generate_trajectory(c.protocol.model, c.protocol.dt, c.protocol.transient, n,
                                     c.protocol.integrator);
  const std::string path = output_path(c, "truth.csv");
  write_series(path, s, c, manifest("simulate", c, 0), true);
  out << "wrote " << s.size() << " samples to " << path << "\n";
  return 0;
}

int cmd_train(const ExperimentConfig& c, std::ostream& out) {
  require(c.mode != PredictorKind::kRom, ErrorCode::kInvalidArgument,
          "the ROM has nothing to train; use predict with experiment.mode = rom");
  const TruthData truth = load_truth(c);
  const int dim = static_cast<int>(truth.train.dim());
  const EsnConfig esn = configure_esn(c.esn_for(c.mode), c.mode, dim, truth.input_scale);
  const std::string man = manifest("train", c, esn.seed);
  TrainDiagnostics diag;
  if (c.mode == PredictorKind::kEsn) {
    Reservoir res = init_reservoir(esn);
    diag = train_esn(res, truth.train, esn.washout, esn.gamma);
    save_checkpoint(c.paths.checkpoint, res, std::nullopt, man);
  } else {
    HybridTraining trained = hesn_train(truth.train, esn, rom_params(c.protocol, c.rom_ng),
                                        c.protocol.rom_delay_source);
    diag = trained.diagnostics;
    save_checkpoint(c.paths.checkpoint, trained.model, man);
  }
  out << "mode=" << predictor_name(c.mode) << " seed=" << esn.seed
      << " mse=" << format_double(diag.mse) << " readout_norm=" << format_double(diag.readout_norm)
      << " n_samples=" << diag.n_samples << " checkpoint=" << c.paths.checkpoint << "\n";
  return 0;
}

int cmd_predict(const ExperimentConfig& c, std::ostream& out) {
  const TruthData truth = load_truth(c);
  const TimeSeries warm = truth.warmup(c.protocol.warmup);
  const long n = c.protocol.prediction_steps();
  TimeSeries pred;
  std::uint64_t seed = 0;
  if (c.mode == PredictorKind::kRom) {
    pred = rom_predict(rom_params(c.protocol, c.rom_ng), warm, n, c.protocol.rom_delay_source);
  } else {
    const Checkpoint cp = load_checkpoint(c.paths.checkpoint);
    seed = c.esn.seed;
    if (cp.rom) {
      require(c.mode == PredictorKind::kHesn, ErrorCode::kDimensionMismatch,
              "checkpoint holds a hybrid model but experiment.mode is " + predictor_name(c.mode));
      HybridEsn model = cp.hybrid();
      pred = hesn_predict(model, warm, n);
    } else {
      require(c.mode == PredictorKind::kEsn, ErrorCode::kDimensionMismatch,
              "checkpoint holds a plain ESN but experiment.mode is " + predictor_name(c.mode));
      Reservoir res = cp.reservoir;
      pred = predict_closed_loop(res, warm, n);
    }
  }
  const std::string path = output_path(c, "prediction.csv");
  write_series(path, pred, c, manifest("predict", c, seed), true);
  const double avg = time_average(pred, acoustic_energy_observable(), c.protocol.prediction_discard);
  out << "mode=" << predictor_name(c.mode) << " steps=" << n
      << " average_energy=" << format_double(avg) << " output=" << path << "\n";
  return 0;
}

int cmd_evaluate(const ExperimentConfig& c, std::ostream& out) {
  const TruthData truth = load_truth(c);
  const EvalReport r = evaluate(c.protocol, truth, c.mode, c.esn_for(c.mode), c.rom_ng, c.seeds,
                                c.base_seed, c.workers);
  Table t;
  std::vector<double> seed, err, avg;
  for (const auto& s : r.per_seed) {
    seed.push_back(static_cast<double>(s.seed));
    err.push_back(s.ok ? s.relative_error : std::numeric_limits<double>::infinity());
    avg.push_back(s.ok ? s.predicted_average : std::numeric_limits<double>::quiet_NaN());
  }
  t.add_column("seed", seed);
  t.add_column("relative_error", err);
  t.add_column("predicted_average", avg);
  t.comments.push_back("manifest: " + manifest("evaluate", c, c.base_seed));
  const std::string path = output_path(c, "evaluation.csv");
  write_csv(path, t);
  out << "predictor: " << r.predictor << "\n"
      << "reference_average: " << format_double(r.reference_average) << "\n"
      << "predicted_average: " << format_double(r.predicted_average) << "\n"
      << "relative_error: " << format_double(r.relative_error) << "\n"
      << "median_error: " << format_double(r.median_error) << "\n"
      << "horizon: " << format_double(r.horizon) << "\n"
      << "n_prediction_steps: " << r.n_prediction_steps << "\n"
      << "valid: " << (r.valid ? "true" : "false") << "\n";
  for (const auto& s : r.per_seed)
    if (!s.ok) out << "failed seed " << s.seed << ": " << s.error << "\n";
  return 0;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out) {
  const TruthData truth = load_truth(c);
  const auto rows = ng_sweep(c.protocol, truth, c.esn_for(PredictorKind::kHesn), c.sweep_rom_ng,
                             c.seeds, c.base_seed, c.workers);
  Table t;
  std::vector<double> ng, seed, err;
  for (const auto& row : rows)
    for (const auto& s : row.per_seed) {
      ng.push_back(row.rom_ng);
      seed.push_back(static_cast<double>(s.seed));
      err.push_back(s.ok ? s.relative_error : std::numeric_limits<double>::infinity());
    }
  t.add_column("ng", ng);
  t.add_column("seed", seed);
  t.add_column("relative_error", err);
  t.comments.push_back("manifest: " + manifest("sweep-ng", c, c.base_seed));
  const std::string path = output_path(c, "sweep.csv");
  write_csv(path, t);
  out << "reference_average: " << format_double(truth.reference_average) << "\n";
  for (const auto& row : rows) {
    out << "ng=" << row.rom_ng << " median=" << format_double(row.summary.median_error)
        << " valid_seeds=" << row.summary.n_valid << "/" << row.per_seed.size()
        << (row.summary.valid ? "" : " INVALID") << "\n";
    for (const auto& s : row.per_seed)
      if (!s.ok) out << "  failed seed " << s.seed << ": " << s.error << "\n";
  }
  return 0;
}

int cmd_grid(const ExperimentConfig& c, std::ostream& out) {
  const TruthData truth = load_truth(c);
  EsnConfig base = c.esn_for(c.mode);
  const GridResult g = grid_search(c.grid, base,
                                   validation_objective(c.protocol, truth, c.mode, c.rom_ng),
                                   c.workers);
  Table t;
  std::vector<double> s, r, gm, obj;
  for (const auto& cell : g.table) {
    s.push_back(cell.sigma_in);
    r.push_back(cell.spectral_radius);
    gm.push_back(cell.gamma);
    obj.push_back(cell.objective);
  }
  t.add_column("sigma_in", s);
  t.add_column("rho", r);
  t.add_column("gamma", gm);
  t.add_column("objective", obj);
  t.comments.push_back("manifest: " + manifest("grid-search", c, base.seed));
  const std::string path = output_path(c, "grid.csv");
  write_csv(path, t);
  const auto& best = g.table[g.best];
  out << "best sigma_in=" << format_double(best.sigma_in)
      << " rho=" << format_double(best.spectral_radius) << " gamma=" << format_double(best.gamma)
      << " objective=" << format_double(best.objective) << "\n";
  for (const auto& cell : g.table)
    if (!cell.error.empty())
      out << "failed cell sigma_in=" << format_double(cell.sigma_in)
          << " rho=" << format_double(cell.spectral_radius) << ": " << cell.error << "\n";
  return 0;
}

int cmd_lyapunov(const ExperimentConfig& c, std::ostream& out) {
  LyapunovOptions opts;
  opts.transient = c.lyapunov.transient;
  opts.integrator = c.protocol.integrator;
  const LyapunovResult r = lyapunov_leading(c.protocol.model, c.protocol.dt, c.lyapunov.t_total,
                                            c.lyapunov.renorm_interval, c.lyapunov.seed, opts);
  if (!c.paths.output.empty()) {
    Table t;
    std::vector<double> idx(r.running.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    t.add_column("renormalization", idx);
    t.add_column("estimate", r.running);
    t.comments.push_back("manifest: " + manifest("lyapunov", c, c.lyapunov.seed));
    write_csv(c.paths.output, t);
  }
  out << "lambda_1=" << format_double(r.exponent) << (r.converged ? "" : " (warning: not converged)")
      << "\n";
  return 0;
}

int cmd_plot(const Options& o, std::ostream& out) {
  require(!o.plot_csv.empty(), ErrorCode::kInvalidArgument, "plot needs --csv");
  require(!o.plot_columns.empty(), ErrorCode::kInvalidArgument, "plot needs --columns");
  PlotOptions p;
  p.mode = o.plot_phase ? PlotMode::kPhase : PlotMode::kLines;
  p.title = o.plot_title;
  const std::string path = o.output.empty() ? "plot.svg" : o.output;
  emit_plot(o.plot_csv, o.plot_columns, path, p);
  out << "wrote " << path << "\n";
  return 0;
}

std::string exit_code_help() {
  std::ostringstream s;
  s << "Exit codes:\n  0  success\n";
  for (ErrorCode c : {ErrorCode::kInvalidArgument, ErrorCode::kConfigParse, ErrorCode::kMissingFile,
                      ErrorCode::kDimensionMismatch, ErrorCode::kNumericalBlowup,
                      ErrorCode::kSingularSystem, ErrorCode::kSpectralRadius,
                      ErrorCode::kInsufficientData, ErrorCode::kUntrained,
                      ErrorCode::kZeroReference, ErrorCode::kEmptyWindow})
    s << "  " << static_cast<int>(c) << (static_cast<int>(c) < 10 ? "  " : " ") << error_name(c)
      << "\n";
  s << "Errors are reported on stderr as one line: error: <name>: <message>\n";
  return s.str();
}

std::string config_help() {
  std::ostringstream s;
  s << "Config keys (key = value, '#' comments; --set beats the file, the file beats defaults):\n";
  const ExperimentConfig defaults;
  for (const auto& k : config_keys())
    s << "  " << k.key << " = " << config_value(defaults, k.key) << "\n      " << k.description
      << "\n";
  return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Echo state networks and hybrid ESNs for ergodic averages of a delayed "
               "thermoacoustic model"};
  app.footer(exit_code_help());
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-c,--config", o.config_path, "Config file");
  app.add_option("--set", o.overrides, "Override a config key, KEY=VALUE (repeatable)");
  app.add_option("-o,--output", o.output, "Output file (paths.output)");
  app.add_option("--mode", o.mode, "Predictor: esn, hesn or rom (experiment.mode)");
  app.add_option("-j,--workers", o.workers, "Worker threads (experiment.workers)");
  app.add_option("--seed", o.seed, "Seed (esn.seed and experiment.base_seed)");
  app.add_flag_function(
      "--list-keys", [&](std::int64_t) {
        out << config_help();
        throw CLI::Success();
      },
      "List every config key with its default");

  auto* simulate = app.add_subcommand("simulate", "Integrate the truth model and write its CSV");
  auto* train = app.add_subcommand("train", "Train an ESN or hESN and write a checkpoint");
  auto* predict = app.add_subcommand("predict", "Closed-loop prediction from a checkpoint");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Relative error of the average acoustic energy over seeds");
  auto* sweep = app.add_subcommand("sweep-ng", "hESN error against the number of ROM modes");
  auto* grid = app.add_subcommand("grid-search", "Exhaustive hyperparameter search");
  auto* lyap = app.add_subcommand("lyapunov", "Leading Lyapunov exponent of the truth model");
  auto* plot = app.add_subcommand("plot", "SVG line or phase plot of CSV columns");
  plot->add_option("--csv", o.plot_csv, "Input CSV")->required();
  plot->add_option("--columns", o.plot_columns, "Columns to draw")->required()->delimiter(',');
  plot->add_flag("--phase", o.plot_phase, "Phase plot of the second column against the first");
  plot->add_option("--title", o.plot_title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << error_name(ErrorCode::kInvalidArgument) << ": " << e.what() << "\n";
    return static_cast<int>(ErrorCode::kInvalidArgument);
  }

  try {
    if (plot->parsed()) return cmd_plot(o, out);
    const ExperimentConfig config = load_config(o);
    if (simulate->parsed()) return cmd_simulate(config, out);
    if (train->parsed()) return cmd_train(config, out);
    if (predict->parsed()) return cmd_predict(config, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
    if (grid->parsed()) return cmd_grid(config, out);
    if (lyap->parsed()) return cmd_lyapunov(config, out);
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hesn
