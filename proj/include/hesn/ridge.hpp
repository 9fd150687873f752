#pragma once

#include <Eigen/Dense>

namespace hesn {

/// W_out = Y X^T (X X^T + gamma I)^{-1}, computed from a Cholesky-type
/// factorization of the symmetric system rather than an explicit inverse.
/// Throws kSingularSystem when the system is not positive definite (in
/// practice gamma = 0 with rank-deficient X).
Eigen::MatrixXd train_readout(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                              double gamma);

/// ||Y - W X||_F^2 + gamma ||W||_F^2, the objective the closed form minimizes.
double ridge_objective(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                       const Eigen::MatrixXd& w_out, double gamma);

}  // namespace hesn
