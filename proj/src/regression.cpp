#include "spillover/regression.hpp"

#include <string>

#include "spillover/error.hpp"

namespace spillover {

namespace {

bool usable(const Eigen::LLT<Eigen::MatrixXd>& llt, double scale) {
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = llt.matrixLLT().diagonal();
  return d.allFinite() && d.array().square().minCoeff() > 1e-14 * scale;
}

}  // namespace

Eigen::MatrixXd SpdFactor::inverse() const {
  const auto k = llt.matrixLLT().rows();
  return llt.solve(Eigen::MatrixXd::Identity(k, k));
}

SpdFactor factor_spd(const Eigen::MatrixXd& A) {
  const auto k = A.rows();
  SpdFactor f;
  if (k == 0) return f;
  const double scale = A.diagonal().cwiseAbs().maxCoeff();
  f.llt.compute(A);
  if (usable(f.llt, scale)) return f;

  f.ridge = 1e-10 * A.trace() / static_cast<double>(k);
  if (!(f.ridge > 0.0)) throw Error(Errc::singular_matrix, "matrix has non-positive trace");
  Eigen::MatrixXd ridged = A;
  ridged.diagonal().array() += f.ridge;
  f.llt.compute(ridged);
  if (f.llt.info() != Eigen::Success) {
    throw Error(Errc::singular_matrix, "not positive definite after ridge of " + std::to_string(f.ridge));
  }
  return f;
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw Error(Errc::invalid_argument, "design and response differ in length");
  if (X.rows() < X.cols()) {
    throw Error(Errc::rank_deficient, std::to_string(X.rows()) + " rows for " + std::to_string(X.cols()) +
                                          " regressors");
  }
  OlsFit fit;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() == X.cols()) {
    fit.coef = qr.solve(y);
  } else {
    Eigen::MatrixXd gram = X.transpose() * X;
    fit.ridge = 1e-10 * gram.trace() / static_cast<double>(X.cols());
    if (!(fit.ridge > 0.0)) throw Error(Errc::rank_deficient, "design matrix is identically zero");
    gram.diagonal().array() += fit.ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw Error(Errc::rank_deficient, "design rank deficient after ridge");
    fit.coef = llt.solve(X.transpose() * y);
  }
  fit.residuals = y - X * fit.coef;
  return fit;
}

Eigen::MatrixXd gram_inverse(const Eigen::MatrixXd& X, double* ridge) {
  const auto k = X.cols();
  Eigen::MatrixXd gram = X.transpose() * X;
  double added = 0.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < k) {
    added = 1e-10 * gram.trace() / static_cast<double>(k);
    if (!(added > 0.0)) throw Error(Errc::rank_deficient, "design matrix is identically zero");
    gram.diagonal().array() += added;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error(Errc::rank_deficient, "Gram matrix not invertible");
  if (ridge) *ridge = added;
  return llt.solve(Eigen::MatrixXd::Identity(k, k));
}

Eigen::VectorXd hac_se(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals, int bandwidth) {
  if (bandwidth < 0) throw Error(Errc::invalid_argument, "negative HAC bandwidth");
  if (X.rows() != residuals.size()) throw Error(Errc::invalid_argument, "design and residuals differ in length");
  const Eigen::MatrixXd bread = gram_inverse(X);
  const Eigen::MatrixXd scores = X.array().colwise() * residuals.array();  // row t = x_t e_t
  Eigen::MatrixXd meat = scores.transpose() * scores;
  const auto T = scores.rows();
  for (int l = 1; l <= bandwidth && l < T; ++l) {
    const double w = 1.0 - static_cast<double>(l) / (bandwidth + 1.0);
    // Gamma_l = sum_t s_t s_{t-l}'
    Eigen::MatrixXd gamma = scores.bottomRows(T - l).transpose() * scores.topRows(T - l);
    meat += w * (gamma + gamma.transpose());
  }
  const Eigen::MatrixXd cov = bread * meat * bread;
  return cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

}  // namespace spillover
