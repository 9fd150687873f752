#pragma once

#include "hesn/delay_history.hpp"
#include "hesn/galerkin.hpp"
#include "hesn/time_series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hesn {

struct IntegratorOptions {
  double blowup_bound = 1e6;
};

/// Fixed-step RK4 for the delayed Galerkin system. Owns the packed state and
/// advances the delay buffer in lockstep; the buffer always holds the sample
/// at the current time.
class DelayIntegrator {
 public:
  /// `history` must end at t0 and span tau behind it; its latest sample is
  /// overwritten with the initial state's flame velocity. Its spacing must
  /// equal dt.
  DelayIntegrator(const ModelParams& params, const Eigen::Ref<const Eigen::VectorXd>& initial,
                  DelayHistory history, double dt, IntegratorOptions options = {});

  /// Zero history behind t0 = 0.
  static DelayIntegrator from_rest_history(const ModelParams& params,
                                           const Eigen::Ref<const Eigen::VectorXd>& initial,
                                           double dt, IntegratorOptions options = {});

  void step();
  void advance(long n_steps);

  const Eigen::VectorXd& state() const { return y_; }
  double time() const;
  long steps_taken() const { return n_; }
  const DelayHistory& history() const { return history_; }
  DelayHistory& history() { return history_; }
  const GalerkinModel& model() const { return model_; }
  double dt() const { return dt_; }
  // Right-hand-side evaluations that saw 1 + u_f < 0 in King's law.
  std::uint64_t negative_argument_events() const { return negative_events_; }

  /// Replaces the state at the current time and refreshes the latest history sample.
  void set_state(const Eigen::Ref<const Eigen::VectorXd>& y);

 private:
  void check_bounds() const;

  GalerkinModel model_;
  Eigen::VectorXd y_;
  DelayHistory history_;
  double dt_;
  double t0_;
  long n_ = 0;
  IntegratorOptions options_;
  std::uint64_t negative_events_ = 0;
  Eigen::VectorXd k1_, k2_, k3_, k4_, tmp_;
};

/// Integrates n_steps of size dt; the returned series holds n_steps + 1
/// samples starting at the initial state. `history` is advanced in place.
TimeSeries integrate(const GalerkinState& initial, DelayHistory& history,
                     const ModelParams& params, double dt, long n_steps,
                     IntegratorOptions options = {});

/// Canonical truth run: eta_1 = 1, everything else zero, zero history, the
/// first `transient` time units discarded. Returns `n_samples` samples.
TimeSeries generate_trajectory(const ModelParams& params, double dt, double transient,
                               long n_samples, IntegratorOptions options = {});

/// eta_1 values where mu_1 crosses zero upwards (cubic interpolation between
/// samples), for samples at or after `discard` time units from the start.
std::vector<double> poincare_crossings(const TimeSeries& series, int n_modes, double discard);

}  // namespace hesn
