#include "hesn/error.hpp"
#include "hesn/evaluation.hpp"
#include "hesn/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

using namespace hesn;

namespace {

TimeSeries random_series(int dim, long n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 3.0);
  TimeSeries s{0.01, 5.0, Eigen::MatrixXd(dim, n)};
  for (auto& v : s.states.reshaped()) v = normal(gen);
  return s;
}

Protocol small_protocol() {
  Protocol p;
  p.transient = 50.0;
  p.reference_time = 30.0;
  p.train_samples = 800;
  p.horizon = 5.0;
  p.validation_time = 3.0;
  return p;
}

EsnConfig small_esn() {
  EsnConfig c;
  c.n_reservoir = 40;
  c.density = 0.1;
  c.washout = 50;
  c.spectral_radius = 0.3;
  return c;
}

}  // namespace

TEST_CASE("time average basics") {
  const Observable first{"first", [](const Eigen::Ref<const Eigen::VectorXd>& y) { return y[0]; }};
  TimeSeries c{0.1, 0.0, Eigen::MatrixXd::Constant(1, 50, 2.5)};
  CHECK(time_average(c, first) == doctest::Approx(2.5));

  // sin^2 over exactly ten periods of a sampled sine.
  const long per_period = 100;
  TimeSeries s{0.01, 0.0, Eigen::MatrixXd(1, 10 * per_period)};
  for (long k = 0; k < s.size(); ++k)
    s.states(0, k) = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / per_period);
  const Observable sq{"sin2", [](const Eigen::Ref<const Eigen::VectorXd>& y) { return y[0] * y[0]; }};
  CHECK(std::abs(time_average(s, sq) - 0.5) < 1e-4);

  // Discard is measured from t0 and the window starts at the first sample at or after it.
  TimeSeries ramp{0.5, 10.0, Eigen::MatrixXd(1, 10)};
  for (long k = 0; k < 10; ++k) ramp.states(0, k) = static_cast<double>(k);
  CHECK(time_average(ramp, first, 1.0) == doctest::Approx((2 + 3 + 4 + 5 + 6 + 7 + 8 + 9) / 8.0));
  CHECK(time_average(ramp, first, 0.9) == doctest::Approx((2 + 3 + 4 + 5 + 6 + 7 + 8 + 9) / 8.0));
  CHECK_THROWS_AS(time_average(ramp, first, 5.0), Error);
}

TEST_CASE("time average agrees with a two-pass summation oracle") {
  const Observable energy = acoustic_energy_observable();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TimeSeries s = random_series(20, 3000 + 37 * static_cast<long>(seed), seed);
    const double discard = 0.37 * static_cast<double>(seed);
    const Eigen::Index first = static_cast<Eigen::Index>(std::ceil(discard / s.dt - 1e-9));
    std::vector<double> v;
    for (Eigen::Index k = first; k < s.size(); ++k) {
      double e = 0.0;
      for (Eigen::Index i = 0; i < s.dim(); ++i) e += s.states(i, k) * s.states(i, k);
      v.push_back(e / 4.0);
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double correction = 0.0;
    for (double x : v) correction += x - mean;
    mean += correction / static_cast<double>(v.size());
    CHECK(std::abs(time_average(s, energy, discard) - mean) / mean < 1e-12);
  }
}

TEST_CASE("time average is linear and ignores sample order") {
  const TimeSeries s = random_series(4, 500, 3);
  const Observable a{"a", [](const Eigen::Ref<const Eigen::VectorXd>& y) { return y[0] * y[1]; }};
  const Observable b{"b", [](const Eigen::Ref<const Eigen::VectorXd>& y) { return std::cos(y[2]); }};
  const Observable combo{"c", [&](const Eigen::Ref<const Eigen::VectorXd>& y) {
                           return 2.0 * a.eval(y) - 3.0 * b.eval(y);
                         }};
  CHECK(time_average(s, combo) ==
        doctest::Approx(2.0 * time_average(s, a) - 3.0 * time_average(s, b)).epsilon(1e-12));

  TimeSeries shuffled = s;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  for (std::size_t i = 0; i < order.size(); ++i)
    shuffled.states.col(static_cast<Eigen::Index>(i)) = s.states.col(order[i]);
  CHECK(time_average(shuffled, a) == doctest::Approx(time_average(s, a)).epsilon(1e-12));
}

TEST_CASE("relative error") {
  CHECK(relative_error(5.0, 5.0) == 0.0);
  CHECK(relative_error(0.52, 1.0) == doctest::Approx(0.48));
  CHECK(relative_error(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(relative_error(1.0, -2.0) == doctest::Approx(1.5));
  try {
    relative_error(1.0, 0.0);
    FAIL("expected a zero-reference error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroReference);
  }
}

TEST_CASE("median and seed summaries") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), Error);

  std::vector<SeedResult> r;
  for (int i = 0; i < 4; ++i) r.push_back({static_cast<std::uint64_t>(i), true, 1.0 + i, 0.1 * i, {}});
  SeedSummary s = summarize(r);
  CHECK(s.valid);
  CHECK(s.median_error == doctest::Approx(0.15));
  std::reverse(r.begin(), r.end());
  CHECK(summarize(r).median_error == s.median_error);

  r[0].ok = r[1].ok = r[2].ok = false;
  s = summarize(r);
  CHECK_FALSE(s.valid);
  CHECK(s.n_valid == 1);
}

TEST_CASE("grid search") {
  EsnConfig base;
  GridSpec one{{0.2}, {0.3}, {1e-7}};
  auto quad = [](const EsnConfig& c) {
    return std::pow(c.sigma_in - 0.1, 2) + std::pow(c.spectral_radius - 0.3, 2) + c.gamma;
  };
  GridResult g = grid_search(one, base, quad, 1);
  REQUIRE(g.table.size() == 1);
  CHECK(g.best == 0);

  GridSpec full{{0.01, 0.03, 0.1, 0.2}, {0.1, 0.3, 0.5}, {1e-7, 1e-3}};
  g = grid_search(full, base, quad, 3);
  CHECK(g.table.size() == 24);
  CHECK(g.table[g.best].sigma_in == 0.1);
  CHECK(g.table[g.best].spectral_radius == 0.3);
  CHECK(g.table[g.best].gamma == 1e-7);

  // Argmin is unchanged by a strictly increasing transform of the objective.
  const GridResult t =
      grid_search(full, base, [&](const EsnConfig& c) { return std::exp(5.0 * quad(c)) - 7.0; }, 2);
  CHECK(t.best == g.best);

  // Ties go to the lexicographically smallest (sigma_in, rho, gamma).
  GridSpec tie{{0.2, 0.03}, {0.3, 0.1}, {1e-3, 1e-7}};
  const GridResult tg = grid_search(tie, base, [](const EsnConfig&) { return 1.0; }, 1);
  CHECK(tg.table[tg.best].sigma_in == 0.03);
  CHECK(tg.table[tg.best].spectral_radius == 0.1);
  CHECK(tg.table[tg.best].gamma == 1e-7);

  // Failures become infinite cells with their error kept.
  const GridResult fg = grid_search(full, base, [](const EsnConfig& c) -> double {
    if (c.sigma_in < 0.05) fail(ErrorCode::kNumericalBlowup, "boom");
    return c.sigma_in;
  }, 1);
  CHECK(std::isinf(fg.table[0].objective));
  CHECK(fg.table[0].error.find("boom") != std::string::npos);
  CHECK(fg.table[fg.best].sigma_in == 0.1);

  CHECK_THROWS_AS(grid_search(GridSpec{{}, {0.3}, {1e-7}}, base, quad, 1), Error);
}

TEST_CASE("truth preparation") {
  const Protocol p = small_protocol();
  const TruthData t = prepare_truth(p);
  CHECK(t.train.size() == 800);
  CHECK(t.future.size() == 500);
  CHECK(t.train.t0 == doctest::Approx(50.0));
  CHECK(t.future.t0 == doctest::Approx(58.0));
  CHECK(t.input_scale == t.train.states.cwiseAbs().maxCoeff());
  CHECK(t.reference_average > 0.0);
  CHECK(t.warmup(100).t0 == doctest::Approx(57.0));
}

TEST_CASE("sweep shape, determinism and worker independence") {
  const Protocol p = small_protocol();
  const TruthData t = prepare_truth(p);
  const auto one = ng_sweep(p, t, small_esn(), {1, 3, 10}, 3, 100, 1);
  const auto three = ng_sweep(p, t, small_esn(), {1, 3, 10}, 3, 100, 3);
  REQUIRE(one.size() == 3);
  for (std::size_t r = 0; r < one.size(); ++r) {
    CHECK(one[r].per_seed.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
      CHECK(one[r].per_seed[s].seed == 100 + s);
      CHECK(one[r].per_seed[s].relative_error == three[r].per_seed[s].relative_error);
    }
    CHECK(one[r].summary.median_error == three[r].summary.median_error);
  }
  CHECK(one[0].rom_ng == 1);
  CHECK(one[2].rom_ng == 10);
  CHECK_THROWS_AS(ng_sweep(p, t, small_esn(), {11}, 3, 0, 1), Error);
}

TEST_CASE("evaluation report") {
  const Protocol p = small_protocol();
  const TruthData t = prepare_truth(p);
  const EvalReport r = evaluate(p, t, PredictorKind::kEsn, small_esn(), 1, 4, 0, 2);
  CHECK(r.per_seed.size() == 4);
  CHECK(r.n_prediction_steps == 500);
  CHECK(r.horizon == 5.0);
  CHECK(r.reference_average == t.reference_average);
  if (r.valid)
    CHECK(r.relative_error == doctest::Approx(std::abs(r.predicted_average - r.reference_average) /
                                              r.reference_average));
  const EvalReport rom = evaluate(p, t, PredictorKind::kRom, small_esn(), 1, 4, 0, 1);
  CHECK(rom.per_seed.size() == 1);
  CHECK(rom.valid);

  const GridObjective obj = validation_objective(p, t, PredictorKind::kHesn, 1);
  EsnConfig c = small_esn();
  const double v = obj(c);
  CHECK(std::isfinite(v));
  CHECK(v == obj(c));
}

TEST_CASE("pinned reference average") {
  std::ifstream in(std::string(HESN_FIXTURE_DIR) + "/reference_energy.txt");
  REQUIRE(static_cast<bool>(in));
  double pinned = 0.0, independent = 0.0;
  for (std::string key; in >> key;) {
    if (key == "cpp") in >> pinned;
    else if (key == "python") in >> independent;
    else in.ignore(1 << 20, '\n');
  }
  REQUIRE(pinned > 0.0);
  const TruthData t = prepare_truth(Protocol{});
  CHECK(t.reference_average == doctest::Approx(pinned).epsilon(1e-12));
  // The independent integrator rounds differently, so only the statistics agree.
  CHECK(std::abs(pinned - independent) / independent < 0.03);
}
