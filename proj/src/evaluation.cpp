#include "hesn/evaluation.hpp"

#include "hesn/error.hpp"
#include "hesn/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hesn {

Observable acoustic_energy_observable() {
  return {"acoustic_energy", [](const Eigen::Ref<const Eigen::VectorXd>& y) {
            return 0.25 * y.squaredNorm();
          }};
}

double time_average(const TimeSeries& series, const Observable& observable, double discard) {
  require(static_cast<bool>(observable.eval), ErrorCode::kInvalidArgument,
          "observable has no evaluation function");
  require(discard >= 0.0, ErrorCode::kInvalidArgument, "discard must be >= 0");
  // First index with n * dt >= discard, tolerant to rounding of discard / dt.
  const double k = discard / series.dt;
  Eigen::Index first = static_cast<Eigen::Index>(std::ceil(k - 1e-9));
  require(first < series.size(), ErrorCode::kEmptyWindow,
          "no samples remain after discarding " + std::to_string(discard) + " time units");
  double sum = 0.0;
  for (Eigen::Index n = first; n < series.size(); ++n) sum += observable.eval(series.states.col(n));
  return sum / static_cast<double>(series.size() - first);
}

double relative_error(double predicted, double reference) {
  require(reference != 0.0, ErrorCode::kZeroReference, "relative error against a zero reference");
  return std::abs(predicted - reference) / std::abs(reference);
}

double median(std::vector<double> values) {
  require(!values.empty(), ErrorCode::kEmptyWindow, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SeedSummary summarize(const std::vector<SeedResult>& results) {
  std::vector<double> errors;
  std::vector<double> averages;
  for (const auto& r : results)
    if (r.ok) {
      errors.push_back(r.relative_error);
      averages.push_back(r.predicted_average);
    }
  SeedSummary s;
  s.n_valid = static_cast<int>(errors.size());
  s.valid = !errors.empty() && 2 * errors.size() >= results.size();
  if (errors.empty()) {
    s.median_error = std::numeric_limits<double>::quiet_NaN();
    s.median_predicted_average = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.median_error = median(std::move(errors));
  s.median_predicted_average = median(std::move(averages));
  return s;
}

double oscillation_amplitude(const TimeSeries& series, Eigen::Index component, Eigen::Index from) {
  require(component >= 0 && component < series.dim(), ErrorCode::kDimensionMismatch,
          "component index out of range");
  require(from >= 0 && from < series.size(), ErrorCode::kEmptyWindow, "amplitude window is empty");
  const auto row = series.states.row(component).tail(series.size() - from);
  return 0.5 * (row.maxCoeff() - row.minCoeff());
}

double rms(const TimeSeries& series, Eigen::Index component) {
  require(component >= 0 && component < series.dim(), ErrorCode::kDimensionMismatch,
          "component index out of range");
  require(series.size() > 0, ErrorCode::kEmptyWindow, "rms of an empty series");
  return std::sqrt(series.states.row(component).squaredNorm() / static_cast<double>(series.size()));
}

double divergence_time(const TimeSeries& a, const TimeSeries& b,
                       const std::vector<Eigen::Index>& components, double threshold) {
  require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch, "series dimensions differ");
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (Eigen::Index c : components) {
      const double d = a.states(c, i) - b.states(c, i);
      d2 += d * d;
    }
    if (!(std::sqrt(d2) <= threshold)) return static_cast<double>(i) * a.dt;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace hesn
