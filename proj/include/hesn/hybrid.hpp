#pragma once

#include "hesn/delay_history.hpp"
#include "hesn/galerkin.hpp"
#include "hesn/reservoir.hpp"
#include "hesn/time_series.hpp"

#include <Eigen/Dense>

#include <utility>

namespace hesn {

/// Keeps the first rom_modes (eta, mu) pairs of a packed full-system state.
Eigen::VectorXd project_to_rom(const Eigen::Ref<const Eigen::VectorXd>& full, int rom_modes);
/// Zero-pads a packed ROM state back to full_dim.
Eigen::VectorXd embed_from_rom(const Eigen::Ref<const Eigen::VectorXd>& rom, int full_dim);

/// Where the ROM delay buffer takes its flame velocity from when it is fed
/// an input state.
enum class RomDelaySource {
  kFullInput,  // u_f of the full input, all of its modes
  kProjected,  // u_f of the ROM projection only
};

/// One ROM step of length dt from the projection of u_full. The latest sample
/// of rom_delay (at the current time) is replaced by the flame velocity of
/// u_full (or of its projection) before stepping, and the buffer advances by
/// one sample. Returns the ROM prediction embedded in the full dimension.
Eigen::VectorXd rom_one_step(const Eigen::Ref<const Eigen::VectorXd>& u_full,
                             DelayHistory& rom_delay, const ModelParams& rom_params, double dt,
                             RomDelaySource source = RomDelaySource::kFullInput);

/// Half the rows listen to the data input, the other half to the ROM output.
InputPartition hybrid_partition(int n_reservoir, int full_dim);

/// Reservoir plus an imperfect Galerkin model. Reservoir input is
/// [u; y_rom] and readout features are [x; y_rom].
class HybridEsn {
 public:
  HybridEsn(Reservoir reservoir, ModelParams rom_params, int full_dim, double dt,
            RomDelaySource source = RomDelaySource::kFullInput);

  const Reservoir& reservoir() const { return reservoir_; }
  Reservoir& reservoir() { return reservoir_; }
  const ModelParams& rom_params() const { return rom_params_; }
  int full_dim() const { return full_dim_; }
  int rom_dim() const { return rom_params_.state_dim(); }
  double dt() const { return dt_; }
  RomDelaySource delay_source() const { return source_; }
  const DelayHistory& rom_delay() const { return rom_delay_; }
  InputPartition partition() const { return hybrid_partition(reservoir_.n_reservoir(), full_dim_); }

  /// Resets the reservoir and the ROM buffer (zero history ending at t0).
  void reset(double t0);

  /// One teacher-forced or closed-loop step: runs the ROM on u, updates the
  /// reservoir, and returns the readout features [x; y_rom].
  Eigen::VectorXd advance(const Eigen::Ref<const Eigen::VectorXd>& u);

  /// W_out [x; y_rom].
  Eigen::VectorXd readout(const Eigen::Ref<const Eigen::VectorXd>& features) const;

  /// Teacher-forces every sample of warm_inputs from a reset state and
  /// returns the prediction of the sample that follows.
  Eigen::VectorXd warm_up(const TimeSeries& warm_inputs);

  /// Closed loop from the current reservoir/ROM state; `next_input` is the
  /// first emitted sample and is fed back as the next input.
  TimeSeries run_autonomous(Eigen::VectorXd next_input, long n_steps, double t0);

  /// warm_up followed by run_autonomous.
  TimeSeries predict(const TimeSeries& warm_inputs, long n_steps);

  /// Minimum number of warmup samples that fill the ROM delay buffer.
  long min_warmup() const;

 private:
  Reservoir reservoir_;
  ModelParams rom_params_;
  int full_dim_;
  double dt_;
  RomDelaySource source_;
  DelayHistory rom_delay_;
  Eigen::VectorXd input_;
};

struct HybridTraining {
  HybridEsn model;
  TrainDiagnostics diagnostics;
};

/// Teacher-forced training. config.n_inputs must be 2 * data.dim() and
/// config.n_outputs data.dim(); the ROM buffer is fed from the true data.
HybridTraining hesn_train(const TimeSeries& data, const EsnConfig& config,
                          const ModelParams& rom_params,
                          RomDelaySource source = RomDelaySource::kFullInput);

TimeSeries hesn_predict(HybridEsn& model, const TimeSeries& warm_inputs, long n_steps);

/// The ROM on its own: its buffer is warmed from the projected warm_inputs,
/// then it runs autonomously. Output is embedded in the full dimension, with
/// the first sample predicting the one that follows the warmup.
TimeSeries rom_predict(const ModelParams& rom_params, const TimeSeries& warm_inputs,
                       long n_steps, RomDelaySource source = RomDelaySource::kFullInput);

}  // namespace hesn
