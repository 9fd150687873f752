#pragma once

#include "hesn/time_series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hesn {

/// A scalar cost functional of the full state.
struct Observable {
  std::string name;
  std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)> eval;
};

/// E_ac = 1/4 sum (eta_j^2 + mu_j^2) on a packed state.
Observable acoustic_energy_observable();

/// Mean of the observable over samples with t >= t0 + discard.
double time_average(const TimeSeries& series, const Observable& observable, double discard = 0.0);

/// |predicted - reference| / |reference|.
double relative_error(double predicted, double reference);

/// Median of the values; the mean of the two middle values for even counts.
double median(std::vector<double> values);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  double predicted_average = 0.0;
  double relative_error = 0.0;
  std::string error;  // set when !ok
};

struct SeedSummary {
  double median_error = 0.0;
  double median_predicted_average = 0.0;
  int n_valid = 0;
  // False when fewer than half of the seeds produced a result.
  bool valid = false;
};

/// Medians over the successful seeds; order of `results` does not matter.
SeedSummary summarize(const std::vector<SeedResult>& results);

struct EvalReport {
  std::string predictor;
  double reference_average = 0.0;
  // Median over seeds of the predicted averages.
  double predicted_average = 0.0;
  // relative_error(predicted_average, reference_average).
  double relative_error = 0.0;
  // Median over seeds of the per-seed relative errors.
  double median_error = 0.0;
  bool valid = false;
  double horizon = 0.0;
  long n_prediction_steps = 0;
  std::vector<SeedResult> per_seed;
};

/// Half the peak-to-peak range of one component over samples [from, end).
double oscillation_amplitude(const TimeSeries& series, Eigen::Index component, Eigen::Index from);

/// Root mean square of one component.
double rms(const TimeSeries& series, Eigen::Index component);

/// Time from the series start at which |a - b| in the given components first
/// exceeds `threshold` (Euclidean norm over the components); +inf if never.
double divergence_time(const TimeSeries& a, const TimeSeries& b,
                       const std::vector<Eigen::Index>& components, double threshold);

}  // namespace hesn
