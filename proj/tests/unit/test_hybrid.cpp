#include "hesn/error.hpp"
#include "hesn/hybrid.hpp"
#include "hesn/integrator.hpp"
#include "hesn/reservoir.hpp"

#include <doctest.h>

#include <cmath>

using namespace hesn;

namespace {

const TimeSeries& truth() {
  static const TimeSeries ts = generate_trajectory(ModelParams{}, 0.01, 100.0, 2000);
  return ts;
}

EsnConfig hybrid_config(int full_dim, std::uint64_t seed) {
  EsnConfig c;
  c.n_reservoir = 60;
  c.n_inputs = 2 * full_dim;
  c.n_outputs = full_dim;
  c.seed = seed;
  c.washout = 50;
  c.density = 0.1;
  c.spectral_radius = 0.3;
  c.input_scale = 10.0;
  return c;
}

ModelParams rom_of(int n) {
  ModelParams p;
  p.n_modes = n;
  return p;
}

// Delay buffer holding the truth's flame velocity behind sample k.
DelayHistory truth_history(const TimeSeries& ts, Eigen::Index k, const ModelParams& p) {
  const GalerkinModel m(p);
  DelayHistory h(ts.dt, p.tau);
  const auto lag = static_cast<Eigen::Index>(std::lround(p.tau / ts.dt)) + 1;
  for (Eigen::Index i = k - lag; i <= k; ++i)
    h.push({ts.time(i), m.flame_velocity(ts.states.col(i)), m.flame_velocity_rate(ts.states.col(i))});
  return h;
}

}  // namespace

TEST_CASE("projection and embedding") {
  Eigen::VectorXd full(6);
  full << 1, 2, 3, 4, 5, 6;
  const Eigen::VectorXd rom = project_to_rom(full, 2);
  CHECK(rom == (Eigen::VectorXd(4) << 1, 2, 4, 5).finished());
  CHECK(embed_from_rom(rom, 6) == (Eigen::VectorXd(6) << 1, 2, 0, 4, 5, 0).finished());
  CHECK_THROWS_AS(project_to_rom(full, 4), Error);
}

TEST_CASE("one ROM step") {
  SUBCASE("perfect model reproduces the next true sample") {
    const ModelParams p;
    const TimeSeries& ts = truth();
    for (Eigen::Index k : {100, 777, 1500}) {
      DelayHistory h = truth_history(ts, k, p);
      for (auto src : {RomDelaySource::kFullInput, RomDelaySource::kProjected}) {
        DelayHistory hh = h;
        const Eigen::VectorXd next = rom_one_step(ts.states.col(k), hh, p, ts.dt, src);
        CHECK((next - ts.states.col(k + 1)).norm() / ts.states.col(k + 1).norm() < 1e-8);
      }
    }
  }
  SUBCASE("zero input with zero history stays at zero") {
    DelayHistory h = DelayHistory::constant(0.0, 0.01, 0.2);
    CHECK(rom_one_step(Eigen::VectorXd::Zero(20), h, rom_of(1), 0.01).isZero());
  }
  SUBCASE("modes above the ROM size are exactly zero") {
    DelayHistory h = DelayHistory::constant(0.0, 0.01, 0.2);
    const Eigen::VectorXd y = rom_one_step(truth().states.col(10), h, rom_of(1), 0.01);
    CHECK(y.segment(1, 9).isZero());
    CHECK(y.segment(11, 9).isZero());
    CHECK(y[0] != 0.0);
    CHECK(h.latest_time() == doctest::Approx(0.01));
  }
}

TEST_CASE("hybrid training wiring") {
  const TimeSeries data = truth().slice(0, 800);
  const EsnConfig c = hybrid_config(20, 1);
  const HybridTraining t = hesn_train(data, c, rom_of(1));
  const auto& r = t.model.reservoir();
  CHECK(r.feature_dim() == c.n_reservoir + 20);
  CHECK(r.w_out().rows() == 20);
  CHECK(r.w_in().topRightCorner(30, 20).isZero());
  CHECK(r.w_in().bottomLeftCorner(30, 20).isZero());
  CHECK(std::isfinite(t.diagnostics.mse));
  CHECK(t.diagnostics.mse >= 0.0);

  const HybridTraining again = hesn_train(data, c, rom_of(1));
  CHECK(again.diagnostics.mse == t.diagnostics.mse);
  CHECK(again.model.reservoir().w_out() == r.w_out());

  EsnConfig wrong = c;
  wrong.n_inputs = 20;
  CHECK_THROWS_AS(hesn_train(data, wrong, rom_of(1)), Error);
  CHECK_THROWS_AS(hesn_train(data, c, rom_of(11)), Error);
}

TEST_CASE("a perfect ROM does not hurt one-step prediction") {
  const TimeSeries& ts = truth();
  const TimeSeries train = ts.slice(0, 1200);
  const TimeSeries held = ts.slice(1200, 800);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    EsnConfig c = hybrid_config(20, seed);
    HybridTraining h = hesn_train(train, c, rom_of(10));
    EsnConfig pc = c;
    pc.n_inputs = 20;
    Reservoir esn = init_reservoir(pc);
    train_esn(esn, train, pc.washout, pc.gamma);

    double err_h = 0.0, err_e = 0.0;
    h.model.reset(held.t0);
    esn.reset();
    long count = 0;
    for (Eigen::Index n = 0; n + 1 < held.size(); ++n) {
      const Eigen::VectorXd f = h.model.advance(held.states.col(n));
      esn.step(held.states.col(n));
      if (n < 50) continue;
      err_h += (h.model.readout(f) - held.states.col(n + 1)).squaredNorm();
      err_e += (esn.output() - held.states.col(n + 1)).squaredNorm();
      ++count;
    }
    CHECK(err_h / count <= err_e / count);
  }
}

TEST_CASE("negating the reservoir state does not negate the hybrid trajectory") {
  const TimeSeries data = truth().slice(0, 800);
  HybridTraining t = hesn_train(data, hybrid_config(20, 2), rom_of(1));
  HybridEsn a = t.model;
  const TimeSeries warm = data.slice(700, 100);
  const Eigen::VectorXd next = a.warm_up(warm);
  HybridEsn b = a;
  b.reservoir().set_state(-a.reservoir().state());
  const Eigen::VectorXd na = a.readout(a.advance(next));
  const Eigen::VectorXd nb = b.readout(b.advance(next));
  CHECK((na + nb).norm() > 1e-6);
}

TEST_CASE("shapes are consistent for every ROM size") {
  for (int ng = 1; ng <= 10; ++ng) {
    ModelParams p;
    p.n_modes = ng;
    const TimeSeries data = generate_trajectory(p, 0.01, 20.0, 400);
    for (int rom_ng = 1; rom_ng <= ng; rom_ng += std::max(1, ng / 3)) {
      EsnConfig c = hybrid_config(2 * ng, 5);
      c.n_reservoir = 20;
      c.washout = 20;
      HybridTraining t = hesn_train(data, c, rom_of(rom_ng));
      CHECK(t.model.reservoir().feature_dim() == 20 + 2 * ng);
      const TimeSeries pred = hesn_predict(t.model, data.slice(300, 100), 20);
      CHECK(pred.dim() == 2 * ng);
      CHECK(pred.size() == 20);
    }
  }
}

TEST_CASE("predictions do not depend on extra warmup once the reservoir has washed out") {
  const TimeSeries& ts = truth();
  HybridTraining t = hesn_train(ts.slice(0, 1000), hybrid_config(20, 3), rom_of(1));
  HybridEsn a = t.model, b = t.model;
  const TimeSeries short_warm = ts.slice(1600, 300);
  const TimeSeries long_warm = ts.slice(1400, 500);
  const TimeSeries pa = hesn_predict(a, short_warm, 100);
  const TimeSeries pb = hesn_predict(b, long_warm, 100);
  CHECK((pa.states - pb.states).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pa.t0 == doctest::Approx(pb.t0));
}

TEST_CASE("warmup must fill the ROM buffer") {
  const TimeSeries data = truth().slice(0, 600);
  HybridTraining t = hesn_train(data, hybrid_config(20, 4), rom_of(1));
  CHECK(t.model.min_warmup() == 21);
  CHECK_THROWS_AS(hesn_predict(t.model, data.slice(0, 20), 5), Error);
  CHECK_NOTHROW(hesn_predict(t.model, data.slice(0, 21), 5));

  Reservoir untrained = init_reservoir(hybrid_config(20, 4), hybrid_partition(60, 20));
  HybridEsn u(untrained, rom_of(1), 20, 0.01);
  CHECK_THROWS_AS(hesn_predict(u, data.slice(0, 50), 5), Error);
}

TEST_CASE("stand-alone ROM prediction") {
  const TimeSeries& ts = truth();
  const TimeSeries pred = rom_predict(ModelParams{}, ts.slice(0, 100), 50);
  CHECK(pred.size() == 50);
  CHECK(pred.t0 == doctest::Approx(ts.time(100)));
  // The full model as its own ROM tracks the truth for a short time.
  CHECK((pred.states.col(0) - ts.states.col(100)).norm() < 1e-6);
  const TimeSeries low = rom_predict(rom_of(1), ts.slice(0, 100), 50);
  CHECK(low.states.bottomRows(9).isZero());
  CHECK(low.states.block(1, 0, 9, 50).isZero());
}
