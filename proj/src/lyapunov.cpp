#include "hesn/lyapunov.hpp"

#include "hesn/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hesn {

namespace {

double separation(const DelayIntegrator& ref, const DelayIntegrator& pert) {
  // The latest history sample duplicates the state's flame velocity; it is
  // counted once through the state difference and once through the buffer.
  return std::sqrt((pert.state() - ref.state()).squaredNorm() +
                   pert.history().distance_squared(ref.history()));
}

void rescale(const DelayIntegrator& ref, DelayIntegrator& pert, double factor) {
  pert.history().blend_towards(ref.history(), factor);
  pert.set_state(ref.state() + factor * (pert.state() - ref.state()));
}

}  // namespace

LyapunovResult lyapunov_leading(const ModelParams& params, double dt, double t_total,
                                double renorm_interval, std::uint64_t seed,
                                const LyapunovOptions& options) {
  params.validate();
  require(dt > 0.0, ErrorCode::kInvalidArgument, "dt must be > 0");
  require(renorm_interval >= dt, ErrorCode::kInvalidArgument,
          "renormalization interval must be at least one step");
  require(t_total >= 10.0 * renorm_interval + options.alignment, ErrorCode::kInvalidArgument,
          "total time must be much longer than the renormalization interval");

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(params.state_dim());
  y0[0] = 1.0;
  auto ref = DelayIntegrator::from_rest_history(params, y0, dt, options.integrator);
  ref.advance(std::lround(options.transient / dt));

  // Random direction over the state and the stored history (the latest
  // history sample follows the state, so it is not drawn separately).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd dy(params.state_dim());
  for (auto& v : dy) v = normal(rng);
  DelayIntegrator pert = ref;
  DelayHistory perturbed_history = ref.history();
  {
    std::vector<double> dh(ref.history().size() - 1);
    for (auto& v : dh) v = normal(rng);
    double norm2 = dy.squaredNorm();
    for (double v : dh) norm2 += v * v;
    const double scale = options.initial_separation / std::sqrt(norm2);
    DelayHistory h(ref.history().spacing(), ref.history().horizon());
    std::size_t i = 0;
    for (const auto& s : ref.history().samples()) {
      const double du = i < dh.size() ? scale * dh[i] : 0.0;
      h.push({s.time, s.u_f + du, s.du_f});
      ++i;
    }
    pert.history() = std::move(h);
    pert.set_state(ref.state() + scale * dy);
  }
  const double d0 = separation(ref, pert);

  const long renorm_steps = std::max(1L, std::lround(renorm_interval / dt));
  const double interval = static_cast<double>(renorm_steps) * dt;
  const long n_intervals = static_cast<long>(std::floor(t_total / interval));
  const long skip = static_cast<long>(std::ceil(options.alignment / interval));

  LyapunovResult result;
  double log_sum = 0.0;
  long counted = 0;
  for (long k = 0; k < n_intervals; ++k) {
    ref.advance(renorm_steps);
    pert.advance(renorm_steps);
    const double d = separation(ref, pert);
    require(std::isfinite(d) && d > 0.0, ErrorCode::kNumericalBlowup,
            "trajectory separation degenerated");
    if (k >= skip) {
      log_sum += std::log(d / d0);
      ++counted;
      result.running.push_back(log_sum / (static_cast<double>(counted) * interval));
    }
    rescale(ref, pert, d0 / d);
  }
  require(counted > 0, ErrorCode::kInsufficientData, "no renormalization intervals counted");
  result.exponent = result.running.back();

  const auto half = result.running.begin() + static_cast<long>(result.running.size() / 2);
  const auto [lo, hi] = std::minmax_element(half, result.running.end());
  const double scale = std::max(std::abs(result.exponent), 1e-12);
  result.converged = (*hi - *lo) <= 0.2 * scale;
  return result;
}

}  // namespace hesn
