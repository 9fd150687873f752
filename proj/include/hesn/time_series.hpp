#pragma once

#include <Eigen/Dense>

namespace hesn {

// Equispaced samples stored column-wise: states.col(n) is the state at t0 + n*dt.
struct TimeSeries {
  double dt = 0.01;
  double t0 = 0.0;
  Eigen::MatrixXd states;

  Eigen::Index dim() const { return states.rows(); }
  Eigen::Index size() const { return states.cols(); }
  double time(Eigen::Index n) const { return t0 + static_cast<double>(n) * dt; }
  double span() const { return size() > 0 ? static_cast<double>(size() - 1) * dt : 0.0; }

  /// Samples [first, first + count).
  TimeSeries slice(Eigen::Index first, Eigen::Index count) const {
    return {dt, time(first), states.middleCols(first, count)};
  }
};

}  // namespace hesn
