#pragma once

#include "hesn/time_series.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <vector>

namespace hesn {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class InputConnectivity {
  kOnePerRow,  // each neuron listens to one input component of its block
  kDense,      // each neuron listens to every input component of its block
};

struct EsnConfig {
  int n_reservoir = 100;
  double sigma_in = 0.2;
  double spectral_radius = 0.1;
  double density = 0.03;
  double gamma = 1e-7;
  int washout = 100;
  std::uint64_t seed = 0;
  int n_inputs = 20;
  int n_outputs = 20;
  InputConnectivity input_connectivity = InputConnectivity::kOnePerRow;
  // Inputs are divided by this before entering the reservoir; folded into
  // W_in, so W_in entries lie in (-sigma_in, sigma_in) / input_scale.
  double input_scale = 1.0;

  void validate() const;
};

/// Reservoir rows [row_begin, row_end) receive input only from columns
/// [col_begin, col_end).
struct InputBlock {
  int row_begin;
  int row_end;
  int col_begin;
  int col_end;

  bool operator==(const InputBlock&) const = default;
};
using InputPartition = std::vector<InputBlock>;

/// Blocks must tile the reservoir rows without overlap and reference valid columns.
void validate_partition(const InputPartition& partition, int n_reservoir, int n_inputs);

/// tanh reservoir without bias terms. The readout maps a feature vector of
/// length feature_dim() (the neuron states, possibly followed by extra
/// features supplied by the caller) to the output.
class Reservoir {
 public:
  Reservoir(Eigen::MatrixXd w_in, SparseMatrix w);

  int n_reservoir() const { return static_cast<int>(w_.rows()); }
  int n_inputs() const { return static_cast<int>(w_in_.cols()); }
  int n_outputs() const { return static_cast<int>(w_out_.rows()); }
  int feature_dim() const { return static_cast<int>(w_out_.cols()); }
  bool trained() const { return w_out_.size() > 0; }

  const Eigen::MatrixXd& w_in() const { return w_in_; }
  const SparseMatrix& w() const { return w_; }
  const Eigen::MatrixXd& w_out() const { return w_out_; }
  const Eigen::VectorXd& state() const { return x_; }

  /// Readout must have at least n_reservoir() columns.
  void set_readout(Eigen::MatrixXd w_out);
  void set_state(const Eigen::Ref<const Eigen::VectorXd>& x);
  void reset() { x_.setZero(); }

  /// x <- tanh(W_in u + W x).
  const Eigen::VectorXd& step(const Eigen::Ref<const Eigen::VectorXd>& input);

  /// W_out x for a plain readout (feature_dim() == n_reservoir()).
  Eigen::VectorXd output() const;

  /// W + W_in W_out, derived on demand for a plain square loop.
  Eigen::MatrixXd closed_loop_matrix() const;

  /// Emits n_steps outputs W_out x(n-1), feeding each back as the next input,
  /// starting from the current state. Returned series is stamped with t0 and dt.
  TimeSeries run_autonomous(long n_steps, double t0, double dt);

 private:
  void require_loop() const;

  Eigen::MatrixXd w_in_;
  SparseMatrix w_;
  Eigen::MatrixXd w_out_;
  Eigen::VectorXd x_;
  Eigen::VectorXd pre_;
};

struct SpectralRadiusOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;
  int krylov_dim = 8;
};

/// Largest eigenvalue modulus by power iteration. Each iterate seeds a small
/// Krylov fit (a multi-step generalization of the two-step growth-ratio
/// estimator) so complex dominant pairs and near-ties in modulus converge.
/// Converged when successive estimates differ by less than `tolerance`
/// (relative); throws kSpectralRadius otherwise.
double spectral_radius(const SparseMatrix& w, std::uint64_t seed = 0,
                       const SpectralRadiusOptions& options = {});
double spectral_radius_from(const SparseMatrix& w, Eigen::VectorXd start,
                            const SpectralRadiusOptions& options = {});

/// Draws W_in and W from config.seed and rescales W to config.spectral_radius.
/// Stream order: W_in row by row (one column draw then one value draw per row
/// for kOnePerRow; one value per column of the row's input block for kDense),
/// then for each W entry row-major one Bernoulli draw followed by a value draw
/// when the entry is kept, then the power-iteration start vector.
Reservoir init_reservoir(const EsnConfig& config,
                         const std::optional<InputPartition>& partition = std::nullopt);

struct HarvestedStates {
  Eigen::MatrixXd features;  // X: one column per retained step
  Eigen::MatrixXd targets;   // Y: the next input sample
};

/// Teacher-forced pass from a zero state: column n of X is x(n), column n of
/// Y is u(n+1); the first `washout` pairs are dropped.
HarvestedStates collect_states(Reservoir& reservoir, const TimeSeries& inputs, int washout);

struct TrainDiagnostics {
  double mse = 0.0;           // mean over outputs and samples of squared error
  double readout_norm = 0.0;  // Frobenius norm of W_out
  long n_samples = 0;
};

TrainDiagnostics diagnose_readout(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                  const Eigen::MatrixXd& w_out);

/// Harvests states from `inputs`, trains the readout and installs it.
TrainDiagnostics train_esn(Reservoir& reservoir, const TimeSeries& inputs, int washout,
                           double gamma);

/// Teacher-forced warmup over every sample of `warm_inputs` from a zero state,
/// then n_steps of autonomous prediction. The first output predicts the
/// sample following the warmup.
TimeSeries predict_closed_loop(Reservoir& reservoir, const TimeSeries& warm_inputs, long n_steps);

}  // namespace hesn
