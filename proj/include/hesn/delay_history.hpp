#pragma once

#include <deque>

namespace hesn {

/// One stored sample of the flame velocity and its time derivative.
struct DelaySample {
  double time;
  double u_f;
  double du_f;
};

/// Uniformly spaced record of the flame velocity, long enough to evaluate
/// u_f(t - tau) at every Runge-Kutta stage of the next step. Off-grid values
/// come from cubic Hermite interpolation on (u_f, du_f).
class DelayHistory {
 public:
  DelayHistory(double spacing, double horizon);

  /// Constant history u_f = value on [t_end - horizon - spacing, t_end].
  static DelayHistory constant(double t_end, double spacing, double horizon, double value = 0.0);

  double spacing() const { return spacing_; }
  double horizon() const { return horizon_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double front_time() const;
  double latest_time() const;
  const DelaySample& latest() const;
  const std::deque<DelaySample>& samples() const { return samples_; }

  /// Appends a sample exactly one spacing after the latest one (or the first
  /// sample of an empty buffer). Samples older than the horizon are dropped.
  void push(double u_f, double du_f);
  void push(const DelaySample& sample);
  /// Overwrites the latest sample's values, keeping its time.
  void set_latest(double u_f, double du_f);

  /// True when [t - horizon, t] is covered for t = latest_time().
  bool spans_horizon() const;

  double value_at(double t) const;

  /// this <- reference + factor * (this - reference). Both buffers must hold
  /// the same sample times.
  void blend_towards(const DelayHistory& reference, double factor);
  /// Euclidean distance of the u_f samples from another buffer with the same times.
  double distance_squared(const DelayHistory& other) const;

 private:
  void trim();

  double spacing_;
  double horizon_;
  std::size_t capacity_;
  std::deque<DelaySample> samples_;
};

}  // namespace hesn
