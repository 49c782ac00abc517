#pragma once

#include <Eigen/Dense>

namespace spillover {

/// Cholesky of a symmetric positive-definite matrix. If the plain factorization fails or
/// its smallest pivot is negligible, a ridge of 1e-10 * trace / k is added to the diagonal
/// and the factorization retried; `ridge` records the amount. Throws singular_matrix.
struct SpdFactor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double ridge = 0.0;

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt.solve(rhs); }
  Eigen::MatrixXd inverse() const;
};

SpdFactor factor_spd(const Eigen::MatrixXd& A);

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  double ridge = 0.0;  // nonzero when X was rank deficient
};

/// Least squares by column-pivoted QR; rank-deficient designs fall back to ridge-regularized
/// normal equations. Throws rank_deficient when no fallback is possible.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// (X'X)^-1 with the same rank handling as ols().
Eigen::MatrixXd gram_inverse(const Eigen::MatrixXd& X, double* ridge = nullptr);

/// Newey-West sandwich standard errors with Bartlett weights 1 - l/(L+1).
/// L = 0 gives White's heteroskedasticity-robust errors.
Eigen::VectorXd hac_se(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals, int bandwidth);

}  // namespace spillover
