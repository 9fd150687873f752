#include "hesn/hybrid.hpp"

#include "hesn/error.hpp"
#include "hesn/integrator.hpp"
#include "hesn/ridge.hpp"

#include <cmath>
#include <string>

namespace hesn {

Eigen::VectorXd project_to_rom(const Eigen::Ref<const Eigen::VectorXd>& full, int rom_modes) {
  const auto n = full.size() / 2;
  require(full.size() % 2 == 0 && rom_modes >= 1 && rom_modes <= n,
          ErrorCode::kDimensionMismatch,
          "cannot project a state of length " + std::to_string(full.size()) + " onto " +
              std::to_string(rom_modes) + " modes");
  Eigen::VectorXd rom(2 * rom_modes);
  rom << full.head(rom_modes), full.segment(n, rom_modes);
  return rom;
}

Eigen::VectorXd embed_from_rom(const Eigen::Ref<const Eigen::VectorXd>& rom, int full_dim) {
  const auto r = rom.size() / 2;
  const auto n = full_dim / 2;
  require(rom.size() % 2 == 0 && full_dim % 2 == 0 && r <= n, ErrorCode::kDimensionMismatch,
          "ROM state does not fit the full dimension");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(full_dim);
  full.head(r) = rom.head(r);
  full.segment(n, r) = rom.tail(r);
  return full;
}

Eigen::VectorXd rom_one_step(const Eigen::Ref<const Eigen::VectorXd>& u_full,
                             DelayHistory& rom_delay, const ModelParams& rom_params, double dt,
                             RomDelaySource source) {
  const Eigen::VectorXd y = project_to_rom(u_full, rom_params.n_modes);
  DelayIntegrator integ(rom_params, y, std::move(rom_delay), dt);
  if (source == RomDelaySource::kFullInput) {
    const GalerkinState full = GalerkinState::unpack(u_full);
    integ.history().set_latest(flame_velocity(full, rom_params.x_f),
                               flame_velocity_rate(full, rom_params.x_f));
  }
  integ.step();
  rom_delay = integ.history();
  return embed_from_rom(integ.state(), static_cast<int>(u_full.size()));
}

InputPartition hybrid_partition(int n_reservoir, int full_dim) {
  require(n_reservoir >= 2, ErrorCode::kInvalidArgument,
          "hybrid reservoir needs at least two neurons");
  const int half = n_reservoir / 2;
  return {{0, half, 0, full_dim}, {half, n_reservoir, full_dim, 2 * full_dim}};
}

HybridEsn::HybridEsn(Reservoir reservoir, ModelParams rom_params, int full_dim, double dt,
                     RomDelaySource source)
    : reservoir_(std::move(reservoir)),
      rom_params_(rom_params),
      full_dim_(full_dim),
      dt_(dt),
      source_(source),
      rom_delay_(DelayHistory::constant(0.0, dt, rom_params.tau)) {
  rom_params_.validate();
  require(full_dim_ >= 2 && full_dim_ % 2 == 0, ErrorCode::kDimensionMismatch,
          "full dimension must be even and positive");
  require(rom_params_.n_modes <= full_dim_ / 2, ErrorCode::kDimensionMismatch,
          "ROM has more modes than the full system");
  require(reservoir_.n_inputs() == 2 * full_dim_, ErrorCode::kDimensionMismatch,
          "hybrid reservoir input must be [u; y_rom]");
  if (reservoir_.trained())
    require(reservoir_.feature_dim() == reservoir_.n_reservoir() + full_dim_ &&
                reservoir_.n_outputs() == full_dim_,
            ErrorCode::kDimensionMismatch, "hybrid readout must map [x; y_rom] to u");
  input_.resize(2 * full_dim_);
}

void HybridEsn::reset(double t0) {
  reservoir_.reset();
  rom_delay_ = DelayHistory::constant(t0, dt_, rom_params_.tau);
}

Eigen::VectorXd HybridEsn::advance(const Eigen::Ref<const Eigen::VectorXd>& u) {
  require(u.size() == full_dim_, ErrorCode::kDimensionMismatch,
          "hybrid input has length " + std::to_string(u.size()) + ", expected " +
              std::to_string(full_dim_));
  const Eigen::VectorXd y_rom = rom_one_step(u, rom_delay_, rom_params_, dt_, source_);
  input_ << u, y_rom;
  const auto& x = reservoir_.step(input_);
  Eigen::VectorXd features(x.size() + full_dim_);
  features << x, y_rom;
  return features;
}

Eigen::VectorXd HybridEsn::readout(const Eigen::Ref<const Eigen::VectorXd>& features) const {
  require(reservoir_.trained(), ErrorCode::kUntrained, "hybrid readout has not been trained");
  return reservoir_.w_out() * features;
}

long HybridEsn::min_warmup() const {
  return static_cast<long>(std::ceil(rom_params_.tau / dt_ - 1e-9)) + 1;
}

Eigen::VectorXd HybridEsn::warm_up(const TimeSeries& warm_inputs) {
  require(reservoir_.trained(), ErrorCode::kUntrained, "hybrid readout has not been trained");
  require(warm_inputs.size() >= min_warmup(), ErrorCode::kInsufficientData,
          "warmup needs at least " + std::to_string(min_warmup()) + " samples to fill the ROM buffer");
  require(std::abs(warm_inputs.dt - dt_) <= 1e-12 * dt_, ErrorCode::kInvalidArgument,
          "warmup sampling interval differs from the model's");
  reset(warm_inputs.t0);
  Eigen::VectorXd features;
  for (Eigen::Index n = 0; n < warm_inputs.size(); ++n)
    features = advance(warm_inputs.states.col(n));
  return readout(features);
}

TimeSeries HybridEsn::run_autonomous(Eigen::VectorXd next_input, long n_steps, double t0) {
  require(reservoir_.trained(), ErrorCode::kUntrained, "hybrid readout has not been trained");
  require(n_steps >= 0, ErrorCode::kInvalidArgument, "n_steps must be >= 0");
  TimeSeries out{dt_, t0, Eigen::MatrixXd(full_dim_, n_steps)};
  for (long n = 0; n < n_steps; ++n) {
    out.states.col(n) = next_input;
    if (n + 1 < n_steps) next_input = readout(advance(next_input));
  }
  return out;
}

TimeSeries HybridEsn::predict(const TimeSeries& warm_inputs, long n_steps) {
  Eigen::VectorXd next = warm_up(warm_inputs);
  return run_autonomous(std::move(next), n_steps, warm_inputs.time(warm_inputs.size()));
}

HybridTraining hesn_train(const TimeSeries& data, const EsnConfig& config,
                          const ModelParams& rom_params, RomDelaySource source) {
  config.validate();
  rom_params.validate();
  const int full_dim = static_cast<int>(data.dim());
  require(config.n_inputs == 2 * full_dim && config.n_outputs == full_dim,
          ErrorCode::kDimensionMismatch,
          "hybrid config needs n_inputs = 2 * state dimension and n_outputs = state dimension");
  require(data.size() >= config.washout + 2, ErrorCode::kInsufficientData,
          "need at least washout + 2 training samples");

  Reservoir reservoir = init_reservoir(config, hybrid_partition(config.n_reservoir, full_dim));
  HybridEsn model(std::move(reservoir), rom_params, full_dim, data.dt, source);
  model.reset(data.t0);

  const Eigen::Index kept = data.size() - 1 - config.washout;
  Eigen::MatrixXd features(config.n_reservoir + full_dim, kept);
  Eigen::MatrixXd targets(full_dim, kept);
  for (Eigen::Index n = 0; n + 1 < data.size(); ++n) {
    Eigen::VectorXd f = model.advance(data.states.col(n));
    if (n >= config.washout) {
      features.col(n - config.washout) = f;
      targets.col(n - config.washout) = data.states.col(n + 1);
    }
  }
  Eigen::MatrixXd w_out = train_readout(features, targets, config.gamma);
  TrainDiagnostics diag = diagnose_readout(features, targets, w_out);
  model.reservoir().set_readout(std::move(w_out));
  return {std::move(model), diag};
}

TimeSeries hesn_predict(HybridEsn& model, const TimeSeries& warm_inputs, long n_steps) {
  return model.predict(warm_inputs, n_steps);
}

TimeSeries rom_predict(const ModelParams& rom_params, const TimeSeries& warm_inputs,
                       long n_steps, RomDelaySource source) {
  rom_params.validate();
  const auto full_dim = static_cast<int>(warm_inputs.dim());
  require(warm_inputs.size() >= 1, ErrorCode::kInsufficientData, "warmup series is empty");
  require(n_steps >= 0, ErrorCode::kInvalidArgument, "n_steps must be >= 0");
  DelayHistory delay = DelayHistory::constant(warm_inputs.t0, warm_inputs.dt, rom_params.tau);
  Eigen::VectorXd next;
  for (Eigen::Index n = 0; n < warm_inputs.size(); ++n)
    next = rom_one_step(warm_inputs.states.col(n), delay, rom_params, warm_inputs.dt, source);

  TimeSeries out{warm_inputs.dt, warm_inputs.time(warm_inputs.size()),
                 Eigen::MatrixXd(full_dim, n_steps)};
  if (n_steps == 0) return out;
  DelayIntegrator integ(rom_params, project_to_rom(next, rom_params.n_modes), std::move(delay),
                        warm_inputs.dt);
  out.states.col(0) = next;
  for (long n = 1; n < n_steps; ++n) {
    integ.step();
    out.states.col(n) = embed_from_rom(integ.state(), full_dim);
  }
  return out;
}

}  // namespace hesn
