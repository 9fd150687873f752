#include "hesn/ridge.hpp"

#include "hesn/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hesn {

Eigen::MatrixXd train_readout(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                              double gamma) {
  require(features.cols() == targets.cols() && features.cols() >= 1,
          ErrorCode::kDimensionMismatch,
          "feature and target matrices need equal, nonzero column counts (" +
              std::to_string(features.cols()) + " vs " + std::to_string(targets.cols()) + ")");
  require(gamma >= 0.0 && std::isfinite(gamma), ErrorCode::kInvalidArgument,
          "ridge factor must be >= 0");
  require(features.allFinite() && targets.allFinite(), ErrorCode::kNumericalBlowup,
          "non-finite training data");

  const Eigen::Index n = features.rows();
  Eigen::MatrixXd gram(n, n);
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(features);
  gram.diagonal().array() += gamma;
  const Eigen::MatrixXd rhs = features * targets.transpose();

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram.selfadjointView<Eigen::Lower>());
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * dmax;
  if (ldlt.info() != Eigen::Success || !(dmax > 0.0) || d.minCoeff() <= floor)
    fail(ErrorCode::kSingularSystem,
         "ridge system is singular; use gamma > 0 for rank-deficient states");
  return ldlt.solve(rhs).transpose();
}

double ridge_objective(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                       const Eigen::MatrixXd& w_out, double gamma) {
  return (targets - w_out * features).squaredNorm() + gamma * w_out.squaredNorm();
}

}  // namespace hesn
