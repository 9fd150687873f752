#include "hesn/galerkin.hpp"

#include "hesn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hesn {

void ModelParams::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::kInvalidArgument, msg); };
  if (n_modes < 1) bad("model.n_modes must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) bad("model.beta must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) bad("model.tau must be > 0");
  if (!(x_f > 0.0 && x_f < 1.0)) bad("model.x_f must lie in (0, 1)");
  if (!(damping_c1 >= 0.0) || !(damping_c2 >= 0.0))
    bad("model damping coefficients must be >= 0");
  if (!(damping_power > 0.0) || !std::isfinite(damping_power))
    bad("model.damping_power must be > 0");
}

double ModelParams::damping(int j) const {
  const auto jd = static_cast<double>(j);
  return damping_c1 * std::pow(jd, damping_power) + damping_c2 * std::sqrt(jd);
}

GalerkinState GalerkinState::zero(int n_modes) {
  return {Eigen::VectorXd::Zero(n_modes), Eigen::VectorXd::Zero(n_modes)};
}

Eigen::VectorXd GalerkinState::packed() const {
  Eigen::VectorXd y(eta.size() + mu.size());
  y << eta, mu;
  return y;
}

GalerkinState GalerkinState::unpack(const Eigen::Ref<const Eigen::VectorXd>& packed) {
  require(packed.size() % 2 == 0 && packed.size() > 0, ErrorCode::kDimensionMismatch,
          "packed Galerkin state must have even, nonzero length");
  const Eigen::Index n = packed.size() / 2;
  return {packed.head(n), packed.tail(n)};
}

void GalerkinState::validate(int expected_modes) const {
  require(eta.size() == expected_modes && mu.size() == expected_modes,
          ErrorCode::kDimensionMismatch,
          "Galerkin state has " + std::to_string(eta.size()) + "/" +
              std::to_string(mu.size()) + " modes, expected " +
              std::to_string(expected_modes));
  require(eta.allFinite() && mu.allFinite(), ErrorCode::kInvalidArgument,
          "Galerkin state has non-finite components");
}

double flame_velocity(const GalerkinState& state, double x_f) {
  require(x_f > 0.0 && x_f < 1.0, ErrorCode::kInvalidArgument, "x_f must lie in (0, 1)");
  require(state.eta.size() == state.mu.size(), ErrorCode::kDimensionMismatch,
          "eta and mu lengths differ");
  double u = 0.0;
  for (Eigen::Index j = 0; j < state.eta.size(); ++j)
    u += state.eta[j] * std::cos(static_cast<double>(j + 1) * std::numbers::pi * x_f);
  return u;
}

double flame_velocity_rate(const GalerkinState& state, double x_f) {
  require(x_f > 0.0 && x_f < 1.0, ErrorCode::kInvalidArgument, "x_f must lie in (0, 1)");
  require(state.eta.size() == state.mu.size(), ErrorCode::kDimensionMismatch,
          "eta and mu lengths differ");
  double du = 0.0;
  for (Eigen::Index j = 0; j < state.mu.size(); ++j) {
    const double w = static_cast<double>(j + 1) * std::numbers::pi;
    du += w * state.mu[j] * std::cos(w * x_f);
  }
  return du;
}

double heat_release(double u_f_delayed, double beta, KingLaw law,
                    std::uint64_t* negative_events) {
  double arg = 1.0 + u_f_delayed;
  if (arg < 0.0) {
    arg = law == KingLaw::kAbsolute ? -arg : 0.0;
    if (negative_events != nullptr) ++*negative_events;
  }
  return beta * (std::sqrt(arg) - 1.0);
}

GalerkinState rhs(const GalerkinState& state, double u_f_delayed, const ModelParams& params) {
  params.validate();
  state.validate(params.n_modes);
  GalerkinModel model(params);
  Eigen::VectorXd dydt(model.dim());
  model.rhs(state.packed(), u_f_delayed, dydt);
  return GalerkinState::unpack(dydt);
}

double acoustic_energy(const GalerkinState& state) {
  return 0.25 * (state.eta.squaredNorm() + state.mu.squaredNorm());
}

double acoustic_energy(const Eigen::Ref<const Eigen::VectorXd>& packed) {
  return 0.25 * packed.squaredNorm();
}

GalerkinModel::GalerkinModel(const ModelParams& params) : params_(params) {
  params_.validate();
  const int n = params_.n_modes;
  freq_.resize(n);
  zeta_.resize(n);
  cos_xf_.resize(n);
  sin_xf_.resize(n);
  for (int j = 1; j <= n; ++j) {
    const double w = j * std::numbers::pi;
    freq_[j - 1] = w;
    zeta_[j - 1] = params_.damping(j);
    cos_xf_[j - 1] = std::cos(w * params_.x_f);
    sin_xf_[j - 1] = std::sin(w * params_.x_f);
  }
}

double GalerkinModel::flame_velocity(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return y.head(params_.n_modes).dot(cos_xf_);
}

double GalerkinModel::flame_velocity_rate(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return y.tail(params_.n_modes).cwiseProduct(freq_).dot(cos_xf_);
}

void GalerkinModel::rhs(const Eigen::Ref<const Eigen::VectorXd>& y, double u_f_delayed,
                        Eigen::Ref<Eigen::VectorXd> dydt,
                        std::uint64_t* negative_events) const {
  const int n = params_.n_modes;
  require(y.size() == 2 * n && dydt.size() == 2 * n, ErrorCode::kDimensionMismatch,
          "state length does not match 2 * n_modes");
  const double q = heat_release(u_f_delayed, params_.beta, params_.king_law, negative_events);
  const auto eta = y.head(n);
  const auto mu = y.tail(n);
  dydt.head(n) = freq_.cwiseProduct(mu);
  dydt.tail(n) = -freq_.cwiseProduct(eta) - zeta_.cwiseProduct(mu) - (2.0 * q) * sin_xf_;
}

}  // namespace hesn
