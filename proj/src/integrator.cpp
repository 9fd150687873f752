#include "hesn/integrator.hpp"

#include "hesn/error.hpp"

#include <cmath>
#include <string>

namespace hesn {

DelayIntegrator::DelayIntegrator(const ModelParams& params,
                                 const Eigen::Ref<const Eigen::VectorXd>& initial,
                                 DelayHistory history, double dt, IntegratorOptions options)
    : model_(params), y_(initial), history_(std::move(history)), dt_(dt), options_(options) {
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::kInvalidArgument, "dt must be > 0");
  require(y_.size() == model_.dim(), ErrorCode::kDimensionMismatch,
          "initial state has length " + std::to_string(y_.size()) + ", expected " +
              std::to_string(model_.dim()));
  require(params.tau >= dt, ErrorCode::kInvalidArgument,
          "time delay must be at least one integration step");
  require(std::abs(history_.spacing() - dt) <= 1e-12 * dt, ErrorCode::kInvalidArgument,
          "delay history spacing must equal the integration step");
  require(history_.horizon() >= params.tau - 1e-12, ErrorCode::kInvalidArgument,
          "delay history horizon is shorter than the time delay");
  require(!history_.empty(), ErrorCode::kInsufficientData, "delay history is empty");
  require(y_.allFinite(), ErrorCode::kInvalidArgument, "initial state is not finite");

  require(history_.spans_horizon(), ErrorCode::kInsufficientData,
          "delay history does not span the time delay behind the initial time");
  t0_ = history_.latest_time();
  history_.set_latest(model_.flame_velocity(y_), model_.flame_velocity_rate(y_));

  const auto n = model_.dim();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  tmp_.resize(n);
}

DelayIntegrator DelayIntegrator::from_rest_history(const ModelParams& params,
                                                   const Eigen::Ref<const Eigen::VectorXd>& initial,
                                                   double dt, IntegratorOptions options) {
  return DelayIntegrator(params, initial, DelayHistory::constant(0.0, dt, params.tau), dt,
                         options);
}

double DelayIntegrator::time() const { return t0_ + static_cast<double>(n_) * dt_; }

void DelayIntegrator::step() {
  const double t = time();
  const double tau = model_.params().tau;
  const double h = dt_;
  const double d0 = history_.value_at(t - tau);
  const double dh = history_.value_at(t - tau + 0.5 * h);
  const double d1 = history_.value_at(t - tau + h);

  model_.rhs(y_, d0, k1_, &negative_events_);
  tmp_ = y_ + (0.5 * h) * k1_;
  model_.rhs(tmp_, dh, k2_, &negative_events_);
  tmp_ = y_ + (0.5 * h) * k2_;
  model_.rhs(tmp_, dh, k3_, &negative_events_);
  tmp_ = y_ + h * k3_;
  model_.rhs(tmp_, d1, k4_, &negative_events_);
  y_ += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);

  ++n_;
  check_bounds();
  history_.push({time(), model_.flame_velocity(y_), model_.flame_velocity_rate(y_)});
}

void DelayIntegrator::advance(long n_steps) {
  for (long i = 0; i < n_steps; ++i) step();
}

void DelayIntegrator::set_state(const Eigen::Ref<const Eigen::VectorXd>& y) {
  require(y.size() == y_.size(), ErrorCode::kDimensionMismatch, "state length mismatch");
  y_ = y;
  history_.set_latest(model_.flame_velocity(y_), model_.flame_velocity_rate(y_));
}

void DelayIntegrator::check_bounds() const {
  const double m = y_.cwiseAbs().maxCoeff();
  if (!(m <= options_.blowup_bound))
    fail(ErrorCode::kNumericalBlowup,
         "state magnitude " + std::to_string(m) + " exceeded bound " +
             std::to_string(options_.blowup_bound) + " at t=" + std::to_string(time()));
}

TimeSeries integrate(const GalerkinState& initial, DelayHistory& history,
                     const ModelParams& params, double dt, long n_steps,
                     IntegratorOptions options) {
  params.validate();
  initial.validate(params.n_modes);
  require(n_steps >= 0, ErrorCode::kInvalidArgument, "n_steps must be >= 0");
  DelayIntegrator integ(params, initial.packed(), std::move(history), dt, options);
  TimeSeries out{dt, integ.time(), Eigen::MatrixXd(params.state_dim(), n_steps + 1)};
  out.states.col(0) = integ.state();
  for (long i = 1; i <= n_steps; ++i) {
    integ.step();
    out.states.col(i) = integ.state();
  }
  history = integ.history();
  return out;
}

TimeSeries generate_trajectory(const ModelParams& params, double dt, double transient,
                               long n_samples, IntegratorOptions options) {
  params.validate();
  require(n_samples >= 1, ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  require(transient >= 0.0, ErrorCode::kInvalidArgument, "transient must be >= 0");
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(params.state_dim());
  y0[0] = 1.0;
  auto integ = DelayIntegrator::from_rest_history(params, y0, dt, options);
  integ.advance(std::lround(transient / dt));
  TimeSeries out{dt, integ.time(), Eigen::MatrixXd(params.state_dim(), n_samples)};
  out.states.col(0) = integ.state();
  for (long i = 1; i < n_samples; ++i) {
    integ.step();
    out.states.col(i) = integ.state();
  }
  return out;
}

std::vector<double> poincare_crossings(const TimeSeries& series, int n_modes, double discard) {
  require(series.dim() == 2 * n_modes, ErrorCode::kDimensionMismatch,
          "series dimension does not match n_modes");
  // Cubic Lagrange interpolation through samples n-2..n+1 (nodes -1, 0, 1, 2
  // in the local coordinate s); linear at the series ends.
  const auto lagrange = [](double s, const double* v) {
    const double l0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double l1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double l2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double l3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
  };
  std::vector<double> out;
  const auto first = static_cast<Eigen::Index>(std::ceil(discard / series.dt - 1e-9));
  for (Eigen::Index n = std::max<Eigen::Index>(first, 0) + 1; n < series.size(); ++n) {
    const double m0 = series.states(n_modes, n - 1);
    const double m1 = series.states(n_modes, n);
    if (!(m0 < 0.0 && m1 >= 0.0)) continue;
    if (n < 2 || n + 1 >= series.size()) {
      const double s = -m0 / (m1 - m0);
      out.push_back(series.states(0, n - 1) + s * (series.states(0, n) - series.states(0, n - 1)));
      continue;
    }
    double mu[4], eta[4];
    for (int k = 0; k < 4; ++k) {
      mu[k] = series.states(n_modes, n - 2 + k);
      eta[k] = series.states(0, n - 2 + k);
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lagrange(mid, mu) < 0.0 ? lo : hi) = mid;
    }
    out.push_back(lagrange(0.5 * (lo + hi), eta));
  }
  return out;
}

}  // namespace hesn
