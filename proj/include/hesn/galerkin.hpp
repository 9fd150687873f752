#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace hesn {

/// How the modified King's law treats a negative square-root argument 1 + u_f.
enum class KingLaw {
  kAbsolute,  // sqrt(|1 + u_f|)
  kClamped,   // sqrt(max(1 + u_f, 0))
};

/// Physical parameters of the delayed thermoacoustic oscillator chain.
struct ModelParams {
  int n_modes = 10;
  double beta = 7.0;   // heat-release intensity
  double tau = 0.2;    // heat-release time delay
  double x_f = 0.2;    // heat source location on (0, 1)
  double damping_c1 = 0.1;
  double damping_c2 = 0.06;
  double damping_power = 2.0;  // zeta_j = c1 * j^p + c2 * sqrt(j)
  KingLaw king_law = KingLaw::kAbsolute;

  /// Throws ErrorCode::kInvalidArgument naming the offending field.
  void validate() const;

  /// Modal damping of mode j (1-based).
  double damping(int j) const;

  int state_dim() const { return 2 * n_modes; }
};

/// Modal amplitudes: u(x,t) = sum eta_j cos(j pi x), p(x,t) = -sum mu_j sin(j pi x).
struct GalerkinState {
  Eigen::VectorXd eta;
  Eigen::VectorXd mu;

  static GalerkinState zero(int n_modes);

  int n_modes() const { return static_cast<int>(eta.size()); }

  /// Packed layout (eta_1..eta_N, mu_1..mu_N), the row order used by every
  /// time series and network in this library.
  Eigen::VectorXd packed() const;
  static GalerkinState unpack(const Eigen::Ref<const Eigen::VectorXd>& packed);

  void validate(int expected_modes) const;
};

/// Acoustic velocity at x_f.
double flame_velocity(const GalerkinState& state, double x_f);
/// Its time derivative, sum_j j pi mu_j cos(j pi x_f).
double flame_velocity_rate(const GalerkinState& state, double x_f);

/// Modified King's law, beta * (sqrt(1 + u_f) - 1). A negative argument is
/// either clamped at zero or reflected, per `law`; `negative_events`, when
/// given, counts those evaluations.
double heat_release(double u_f_delayed, double beta, KingLaw law = KingLaw::kAbsolute,
                    std::uint64_t* negative_events = nullptr);

/// Time derivative of the modal amplitudes given the delayed flame velocity.
GalerkinState rhs(const GalerkinState& state, double u_f_delayed,
                  const ModelParams& params);

/// Closed form of the integral of (u^2 + p^2)/2 over [0, 1].
double acoustic_energy(const GalerkinState& state);
double acoustic_energy(const Eigen::Ref<const Eigen::VectorXd>& packed);

// Precomputed modal coefficients for repeated evaluation on packed vectors.
class GalerkinModel {
 public:
  explicit GalerkinModel(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  int dim() const { return 2 * params_.n_modes; }

  double flame_velocity(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  // d/dt u_f, exact from the state since eta_j' = j pi mu_j.
  double flame_velocity_rate(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  void rhs(const Eigen::Ref<const Eigen::VectorXd>& y, double u_f_delayed,
           Eigen::Ref<Eigen::VectorXd> dydt, std::uint64_t* negative_events = nullptr) const;

 private:
  ModelParams params_;
  Eigen::VectorXd freq_;      // j pi
  Eigen::VectorXd zeta_;
  Eigen::VectorXd cos_xf_;    // cos(j pi x_f)
  Eigen::VectorXd sin_xf_;    // sin(j pi x_f)
};

}  // namespace hesn
