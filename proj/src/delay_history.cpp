#include "hesn/delay_history.hpp"

#include "hesn/error.hpp"

#include <cmath>
#include <string>

namespace hesn {

namespace {
constexpr double kGridTolerance = 1e-9;
}

DelayHistory::DelayHistory(double spacing, double horizon)
    : spacing_(spacing), horizon_(horizon) {
  require(spacing > 0.0 && std::isfinite(spacing), ErrorCode::kInvalidArgument,
          "delay history spacing must be > 0");
  require(horizon > 0.0 && std::isfinite(horizon), ErrorCode::kInvalidArgument,
          "delay history horizon must be > 0");
  // One extra node on each side so the interval holding t - horizon is whole.
  capacity_ = static_cast<std::size_t>(std::ceil(horizon / spacing - kGridTolerance)) + 2;
}

DelayHistory DelayHistory::constant(double t_end, double spacing, double horizon, double value) {
  DelayHistory h(spacing, horizon);
  const auto n = static_cast<long>(h.capacity_);
  for (long k = n - 1; k >= 0; --k)
    h.samples_.push_back({t_end - static_cast<double>(k) * spacing, value, 0.0});
  return h;
}

double DelayHistory::front_time() const {
  require(!samples_.empty(), ErrorCode::kInsufficientData, "delay history is empty");
  return samples_.front().time;
}

double DelayHistory::latest_time() const { return latest().time; }

const DelaySample& DelayHistory::latest() const {
  require(!samples_.empty(), ErrorCode::kInsufficientData, "delay history is empty");
  return samples_.back();
}

void DelayHistory::push(double u_f, double du_f) {
  const double t = samples_.empty() ? 0.0 : samples_.back().time + spacing_;
  push({t, u_f, du_f});
}

void DelayHistory::push(const DelaySample& sample) {
  if (!samples_.empty()) {
    const double gap = sample.time - samples_.back().time;
    require(std::abs(gap - spacing_) <= kGridTolerance * std::max(1.0, std::abs(sample.time)),
            ErrorCode::kInvalidArgument,
            "delay history samples must be spaced by exactly one step");
  }
  samples_.push_back(sample);
  trim();
}

void DelayHistory::set_latest(double u_f, double du_f) {
  require(!samples_.empty(), ErrorCode::kInsufficientData, "delay history is empty");
  samples_.back().u_f = u_f;
  samples_.back().du_f = du_f;
}

bool DelayHistory::spans_horizon() const {
  if (samples_.empty()) return false;
  return samples_.back().time - samples_.front().time >= horizon_ - kGridTolerance;
}

double DelayHistory::value_at(double t) const {
  require(!samples_.empty(), ErrorCode::kInsufficientData, "delay history is empty");
  const double pos = (t - samples_.front().time) / spacing_;
  const double last = static_cast<double>(samples_.size() - 1);
  if (pos < -kGridTolerance || pos > last + kGridTolerance)
    fail(ErrorCode::kInsufficientData,
         "delayed time " + std::to_string(t) + " lies outside the stored history [" +
             std::to_string(samples_.front().time) + ", " +
             std::to_string(samples_.back().time) + "]");
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) <= kGridTolerance)
    return samples_[static_cast<std::size_t>(nearest)].u_f;

  const auto k = static_cast<std::size_t>(std::floor(pos));
  const DelaySample& a = samples_[k];
  const DelaySample& b = samples_[k + 1];
  const double s = pos - static_cast<double>(k);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * a.u_f + h10 * spacing_ * a.du_f + h01 * b.u_f + h11 * spacing_ * b.du_f;
}

void DelayHistory::blend_towards(const DelayHistory& reference, double factor) {
  require(reference.samples_.size() == samples_.size(), ErrorCode::kDimensionMismatch,
          "delay histories differ in length");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const DelaySample& r = reference.samples_[i];
    DelaySample& s = samples_[i];
    s.u_f = r.u_f + factor * (s.u_f - r.u_f);
    s.du_f = r.du_f + factor * (s.du_f - r.du_f);
  }
}

double DelayHistory::distance_squared(const DelayHistory& other) const {
  require(other.samples_.size() == samples_.size(), ErrorCode::kDimensionMismatch,
          "delay histories differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double e = samples_[i].u_f - other.samples_[i].u_f;
    d += e * e;
  }
  return d;
}

void DelayHistory::trim() {
  while (samples_.size() > capacity_) samples_.pop_front();
}

}  // namespace hesn
