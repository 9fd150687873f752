#include "hesn/reservoir.hpp"

#include "hesn/error.hpp"
#include "hesn/ridge.hpp"
#include "hesn/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace hesn {

void EsnConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::kInvalidArgument, msg); };
  if (n_reservoir < 1) bad("esn.n_reservoir must be >= 1");
  if (!(sigma_in > 0.0)) bad("esn.sigma_in must be > 0");
  if (!(spectral_radius > 0.0)) bad("esn.spectral_radius must be > 0");
  if (!(density > 0.0 && density <= 1.0)) bad("esn.density must lie in (0, 1]");
  if (!(gamma >= 0.0)) bad("esn.gamma must be >= 0");
  if (washout < 0) bad("esn.washout must be >= 0");
  if (n_inputs < 1) bad("esn.n_inputs must be >= 1");
  if (n_outputs < 1) bad("esn.n_outputs must be >= 1");
  if (!(input_scale > 0.0) || !std::isfinite(input_scale)) bad("esn.input_scale must be > 0");
}

void validate_partition(const InputPartition& partition, int n_reservoir, int n_inputs) {
  require(!partition.empty(), ErrorCode::kInvalidArgument, "input partition is empty");
  std::vector<int> owner(static_cast<std::size_t>(n_reservoir), -1);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    const InputBlock& blk = partition[b];
    require(0 <= blk.row_begin && blk.row_begin < blk.row_end && blk.row_end <= n_reservoir,
            ErrorCode::kInvalidArgument,
            "input block " + std::to_string(b) + " has an invalid row range");
    require(0 <= blk.col_begin && blk.col_begin < blk.col_end && blk.col_end <= n_inputs,
            ErrorCode::kInvalidArgument,
            "input block " + std::to_string(b) + " has an invalid column range");
    for (int r = blk.row_begin; r < blk.row_end; ++r) {
      require(owner[static_cast<std::size_t>(r)] < 0, ErrorCode::kInvalidArgument,
              "reservoir row " + std::to_string(r) + " belongs to two input blocks");
      owner[static_cast<std::size_t>(r)] = static_cast<int>(b);
    }
  }
  require(std::none_of(owner.begin(), owner.end(), [](int o) { return o < 0; }),
          ErrorCode::kInvalidArgument, "input partition does not cover every reservoir row");
}

Reservoir::Reservoir(Eigen::MatrixXd w_in, SparseMatrix w)
    : w_in_(std::move(w_in)), w_(std::move(w)) {
  require(w_.rows() == w_.cols(), ErrorCode::kDimensionMismatch, "W must be square");
  require(w_in_.rows() == w_.rows(), ErrorCode::kDimensionMismatch,
          "W_in rows must match the reservoir size");
  x_ = Eigen::VectorXd::Zero(w_.rows());
  pre_.resize(w_.rows());
}

void Reservoir::set_readout(Eigen::MatrixXd w_out) {
  require(w_out.cols() >= n_reservoir() && w_out.rows() >= 1, ErrorCode::kDimensionMismatch,
          "readout must have at least one row and n_reservoir columns");
  w_out_ = std::move(w_out);
}

void Reservoir::set_state(const Eigen::Ref<const Eigen::VectorXd>& x) {
  require(x.size() == x_.size(), ErrorCode::kDimensionMismatch, "reservoir state length mismatch");
  x_ = x;
}

const Eigen::VectorXd& Reservoir::step(const Eigen::Ref<const Eigen::VectorXd>& input) {
  require(input.size() == w_in_.cols(), ErrorCode::kDimensionMismatch,
          "input has length " + std::to_string(input.size()) + ", expected " +
              std::to_string(w_in_.cols()));
  pre_.noalias() = w_in_ * input;
  pre_.noalias() += w_ * x_;
  x_ = pre_.array().tanh();
  return x_;
}

void Reservoir::require_loop() const {
  require(trained(), ErrorCode::kUntrained, "readout has not been trained");
  require(feature_dim() == n_reservoir() && n_outputs() == n_inputs(),
          ErrorCode::kDimensionMismatch,
          "closed loop needs a plain readout with as many outputs as inputs");
}

Eigen::VectorXd Reservoir::output() const {
  require(trained(), ErrorCode::kUntrained, "readout has not been trained");
  require(feature_dim() == n_reservoir(), ErrorCode::kDimensionMismatch,
          "readout expects extra features");
  return w_out_ * x_;
}

Eigen::MatrixXd Reservoir::closed_loop_matrix() const {
  require_loop();
  return Eigen::MatrixXd(w_) + w_in_ * w_out_;
}

TimeSeries Reservoir::run_autonomous(long n_steps, double t0, double dt) {
  require_loop();
  require(n_steps >= 0, ErrorCode::kInvalidArgument, "n_steps must be >= 0");
  TimeSeries out{dt, t0, Eigen::MatrixXd(n_outputs(), n_steps)};
  Eigen::VectorXd u(n_outputs());
  for (long n = 0; n < n_steps; ++n) {
    u.noalias() = w_out_ * x_;
    out.states.col(n) = u;
    step(u);
  }
  return out;
}

double spectral_radius(const SparseMatrix& w, std::uint64_t seed,
                       const SpectralRadiusOptions& options) {
  require(w.rows() == w.cols() && w.rows() > 0, ErrorCode::kDimensionMismatch,
          "spectral radius needs a nonempty square matrix");
  Rng rng(seed);
  Eigen::VectorXd v0(w.rows());
  for (auto& e : v0) e = rng.uniform(-1.0, 1.0);
  return spectral_radius_from(w, v0, options);
}

namespace {

// Largest Ritz-value modulus of the Krylov space {v, Wv, ..., W^{m-1} v}
// built with modified Gram-Schmidt. For m = 1 this is the power-iteration
// growth rate; m = 2 is the two-step recurrence fit that resolves a complex
// pair; larger m separates nearly equal dominant moduli.
double krylov_estimate(const SparseMatrix& w, const Eigen::VectorXd& v, int m) {
  const Eigen::Index n = v.size();
  Eigen::MatrixXd basis(n, m);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  basis.col(0) = v / v.norm();
  int dim = m;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd next = w * basis.col(j);
    for (int i = 0; i <= j; ++i) {
      h(i, j) = basis.col(i).dot(next);
      next -= h(i, j) * basis.col(i);
    }
    const double beta = next.norm();
    if (j + 1 == m) break;
    if (beta <= 1e-14 * std::max(1.0, h.col(j).norm())) {
      dim = j + 1;  // invariant subspace found; its eigenvalues are exact
      break;
    }
    h(j + 1, j) = beta;
    basis.col(j + 1) = next / beta;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(dim, dim), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double spectral_radius_from(const SparseMatrix& w, Eigen::VectorXd v,
                            const SpectralRadiusOptions& options) {
  require(w.rows() == w.cols() && w.rows() == v.size(), ErrorCode::kDimensionMismatch,
          "start vector length does not match W");
  double norm = v.norm();
  require(norm > 0.0, ErrorCode::kSpectralRadius, "zero start vector");
  v /= norm;
  const int m = static_cast<int>(std::min<Eigen::Index>(options.krylov_dim, w.rows()));
  double prev = NAN;
  for (int k = 0; k < options.max_iterations; ++k) {
    const double est = krylov_estimate(w, v, m);
    if (std::isfinite(prev) && std::abs(est - prev) < options.tolerance * std::max(est, 1e-300))
      return est;
    prev = est;
    Eigen::VectorXd next = w * v;
    norm = next.norm();
    if (!(norm > 0.0))
      fail(ErrorCode::kSpectralRadius, "power iteration collapsed to zero (nilpotent W?)");
    v = next / norm;
  }
  fail(ErrorCode::kSpectralRadius, "power iteration did not converge in " +
                                       std::to_string(options.max_iterations) + " iterations");
}

Reservoir init_reservoir(const EsnConfig& config, const std::optional<InputPartition>& partition) {
  config.validate();
  const int nx = config.n_reservoir;
  const int nu = config.n_inputs;
  if (partition) validate_partition(*partition, nx, nu);

  Rng rng(config.seed);
  Eigen::MatrixXd w_in = Eigen::MatrixXd::Zero(nx, nu);
  for (int r = 0; r < nx; ++r) {
    int c0 = 0, c1 = nu;
    if (partition) {
      for (const auto& blk : *partition)
        if (r >= blk.row_begin && r < blk.row_end) {
          c0 = blk.col_begin;
          c1 = blk.col_end;
        }
    }
    if (config.input_connectivity == InputConnectivity::kOnePerRow) {
      const int c = std::min(c1 - 1, c0 + static_cast<int>(rng.uniform01() * (c1 - c0)));
      w_in(r, c) = rng.uniform(-config.sigma_in, config.sigma_in) / config.input_scale;
    } else {
      for (int c = c0; c < c1; ++c)
        w_in(r, c) = rng.uniform(-config.sigma_in, config.sigma_in) / config.input_scale;
    }
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (int r = 0; r < nx; ++r)
    for (int c = 0; c < nx; ++c)
      if (rng.uniform01() < config.density) entries.emplace_back(r, c, rng.uniform(-1.0, 1.0));
  SparseMatrix w(nx, nx);
  w.setFromTriplets(entries.begin(), entries.end());

  Eigen::VectorXd start(nx);
  for (auto& e : start) e = rng.uniform(-1.0, 1.0);
  const double rho = spectral_radius_from(w, start);
  w *= config.spectral_radius / rho;
  return Reservoir(std::move(w_in), std::move(w));
}

HarvestedStates collect_states(Reservoir& reservoir, const TimeSeries& inputs, int washout) {
  require(washout >= 0, ErrorCode::kInvalidArgument, "washout must be >= 0");
  require(inputs.size() >= washout + 2, ErrorCode::kInsufficientData,
          "need at least washout + 2 samples, got " + std::to_string(inputs.size()));
  require(inputs.dim() == reservoir.n_inputs(), ErrorCode::kDimensionMismatch,
          "input dimension does not match W_in");
  const Eigen::Index kept = inputs.size() - 1 - washout;
  HarvestedStates h{Eigen::MatrixXd(reservoir.n_reservoir(), kept),
                    Eigen::MatrixXd(inputs.dim(), kept)};
  reservoir.reset();
  for (Eigen::Index n = 0; n + 1 < inputs.size(); ++n) {
    const auto& x = reservoir.step(inputs.states.col(n));
    if (n >= washout) {
      h.features.col(n - washout) = x;
      h.targets.col(n - washout) = inputs.states.col(n + 1);
    }
  }
  return h;
}

TrainDiagnostics diagnose_readout(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                  const Eigen::MatrixXd& w_out) {
  TrainDiagnostics d;
  d.n_samples = features.cols();
  d.mse = (w_out * features - targets).squaredNorm() /
          static_cast<double>(targets.rows() * targets.cols());
  d.readout_norm = w_out.norm();
  return d;
}

TrainDiagnostics train_esn(Reservoir& reservoir, const TimeSeries& inputs, int washout,
                           double gamma) {
  const HarvestedStates h = collect_states(reservoir, inputs, washout);
  Eigen::MatrixXd w_out = train_readout(h.features, h.targets, gamma);
  TrainDiagnostics d = diagnose_readout(h.features, h.targets, w_out);
  reservoir.set_readout(std::move(w_out));
  return d;
}

TimeSeries predict_closed_loop(Reservoir& reservoir, const TimeSeries& warm_inputs, long n_steps) {
  require(reservoir.trained(), ErrorCode::kUntrained, "readout has not been trained");
  require(warm_inputs.size() >= 1, ErrorCode::kInsufficientData, "warmup series is empty");
  reservoir.reset();
  for (Eigen::Index n = 0; n < warm_inputs.size(); ++n) reservoir.step(warm_inputs.states.col(n));
  return reservoir.run_autonomous(n_steps, warm_inputs.time(warm_inputs.size()), warm_inputs.dt);
}

}  // namespace hesn
