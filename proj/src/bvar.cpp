#include "spillover/bvar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"
#include "spillover/parallel.hpp"
#include "spillover/random.hpp"
#include "spillover/regression.hpp"

namespace spillover::bvar {

void VarxSpec::validate() const {
  if (p < 1) throw Error(Errc::invalid_argument, "VARX lag order must be at least 1");
  if (horizon < 0) throw Error(Errc::invalid_argument, "negative IRF horizon");
  if (n_exo < 0 || exo_lags < 0) throw Error(Errc::invalid_argument, "negative exogenous dimension");
  if (!(hyper.lambda1 > 0.0)) throw Error(Errc::invalid_argument, "lambda1 must be positive");
  if (!(hyper.lambda3 >= 0.0)) throw Error(Errc::invalid_argument, "lambda3 must be non-negative");
  if (!(hyper.lambda4 > 0.0)) throw Error(Errc::invalid_argument, "lambda4 must be positive");
}

VarxData build_varx_data(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec) {
  spec.validate();
  const int T = panel.rows();
  const int n = panel.cols();
  if (n < 1) throw Error(Errc::invalid_argument, "VARX needs at least one endogenous variable");
  if (exo.rows() != T || exo.cols() != spec.n_exo) {
    throw Error(Errc::invalid_argument, "exogenous matrix must be T x n_exo");
  }
  const int start = std::max(spec.p, spec.exo_lags);
  const int rows = T - start;
  if (rows < 1) throw Error(Errc::insufficient_observations, "panel too short for the lag structure");

  const auto det = build_deterministics(panel.start, T);
  VarxData data;
  data.first = panel.month_at(start);
  data.Y = panel.values.bottomRows(rows);
  data.X.resize(rows, spec.k(n));
  for (int r = 0; r < rows; ++r) {
    const int t = start + r;
    int c = 0;
    for (int l = 1; l <= spec.p; ++l) {
      data.X.block(r, c, 1, n) = panel.values.row(t - l);
      c += n;
    }
    if (spec.constant) data.X(r, c++) = 1.0;
    if (spec.trend) data.X(r, c++) = det.trend(t);
    if (spec.covid) data.X(r, c++) = det.covid(t);
    for (int q = 0; q <= spec.exo_lags; ++q) {
      for (int e = 0; e < spec.n_exo; ++e) data.X(r, c++) = exo(t - q, e);
    }
  }
  return data;
}

ArScales ar_residual_scales(const Eigen::MatrixXd& Y, int p) {
  const auto T = Y.rows();
  if (p < 1) throw Error(Errc::invalid_argument, "AR order must be at least 1");
  if (T <= p + 2) {
    throw Error(Errc::insufficient_observations,
                "AR(" + std::to_string(p) + ") scale needs more than " + std::to_string(p + 2) + " observations");
  }
  const auto rows = T - p;
  ArScales out;
  out.sigma.resize(Y.cols());
  out.degenerate.assign(Y.cols(), false);
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    Eigen::MatrixXd X(rows, p + 1);
    X.col(0).setOnes();
    for (int l = 1; l <= p; ++l) X.col(l) = Y.col(j).segment(p - l, rows);
    const auto fit = ols(X, Y.col(j).tail(rows));
    const double sd = std::sqrt(fit.residuals.squaredNorm() / static_cast<double>(rows));
    const double magnitude = std::max(1.0, Y.col(j).cwiseAbs().maxCoeff());
    if (sd <= 1e-10 * magnitude) {
      out.sigma(j) = 0.0;
      out.degenerate[j] = true;
    } else {
      out.sigma(j) = sd;
    }
  }
  return out;
}

NormalWishartPrior build_prior(const VarxSpec& spec, const Eigen::VectorXd& sigma) {
  spec.validate();
  const int n = static_cast<int>(sigma.size());
  for (int j = 0; j < n; ++j) {
    if (!(sigma(j) > 0.0)) {
      throw Error(Errc::degenerate_scale, "non-positive residual scale for variable " + std::to_string(j));
    }
  }
  const int k = spec.k(n);
  const auto& hp = spec.hyper;
  NormalWishartPrior prior;
  prior.B0 = Eigen::MatrixXd::Zero(k, n);
  for (int j = 0; j < n; ++j) prior.B0(spec.lag_row(n, 1, j), j) = hp.own_lag_mean;

  prior.precision.resize(k);
  for (int l = 1; l <= spec.p; ++l) {
    for (int j = 0; j < n; ++j) {
      const double sd = hp.lambda1 / (std::pow(static_cast<double>(l), hp.lambda3) * sigma(j));
      prior.precision(spec.lag_row(n, l, j)) = 1.0 / (sd * sd);
    }
  }
  const double flat_sd = hp.lambda1 * hp.lambda4;
  prior.precision.tail(k - n * spec.p).setConstant(1.0 / (flat_sd * flat_sd));
  prior.S0 = sigma.array().square().matrix().asDiagonal();
  prior.alpha0 = n + 2.0;
  return prior;
}

VarxPosterior posterior_moments(const NormalWishartPrior& prior, const Eigen::MatrixXd& Y,
                                const Eigen::MatrixXd& X) {
  const auto k = prior.B0.rows();
  const auto n = prior.B0.cols();
  if (X.cols() != k || Y.cols() != n || X.rows() != Y.rows()) {
    throw Error(Errc::invalid_argument, "posterior_moments: dimension mismatch");
  }
  Eigen::MatrixXd precision = X.transpose() * X;
  precision.diagonal() += prior.precision;
  SpdFactor factor;
  try {
    factor = factor_spd(precision);
  } catch (const Error& e) {
    throw Error(Errc::singular_matrix, std::string("posterior precision: ") + e.what());
  }

  VarxPosterior post;
  post.ridge = factor.ridge;
  post.Omega_hat = factor.inverse();
  post.Omega_hat = 0.5 * (post.Omega_hat + post.Omega_hat.transpose());
  const Eigen::MatrixXd rhs = prior.precision.asDiagonal() * prior.B0 + X.transpose() * Y;
  post.B_hat = factor.solve(rhs);

  const Eigen::MatrixXd resid = Y - X * post.B_hat;
  const Eigen::MatrixXd shift = post.B_hat - prior.B0;
  post.S_hat = prior.S0 + resid.transpose() * resid + shift.transpose() * prior.precision.asDiagonal() * shift;
  post.S_hat = 0.5 * (post.S_hat + post.S_hat.transpose());
  post.alpha_hat = prior.alpha0 + static_cast<double>(Y.rows());
  return post;
}

std::vector<PosteriorDraw> sample_posterior(const VarxPosterior& post, int n_draws, std::uint64_t seed,
                                            int threads, std::uint64_t stream_offset) {
  const auto n = post.S_hat.rows();
  const auto k = post.B_hat.rows();
  if (n_draws < 1) throw Error(Errc::invalid_argument, "need at least one posterior draw");
  if (!(post.alpha_hat > static_cast<double>(n) - 1.0)) {
    throw Error(Errc::invalid_argument, "inverse-Wishart degrees of freedom must exceed n - 1");
  }
  Eigen::LLT<Eigen::MatrixXd> s_llt(post.S_hat);
  if (s_llt.info() != Eigen::Success) throw Error(Errc::not_positive_definite, "posterior scale S_hat");
  Eigen::LLT<Eigen::MatrixXd> o_llt(post.Omega_hat);
  if (o_llt.info() != Eigen::Success) throw Error(Errc::not_positive_definite, "posterior Omega_hat");
  const Eigen::MatrixXd s_chol = s_llt.matrixL();
  const Eigen::MatrixXd o_chol = o_llt.matrixL();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  std::vector<PosteriorDraw> draws(n_draws);
  parallel_for(n_draws, threads, [&](int i) {
    auto rng = substream(seed, stream_offset + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    // Bartlett factor of a Wishart(I, alpha) draw W = A A'.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      std::chi_squared_distribution<double> chi2(post.alpha_hat - static_cast<double>(r));
      A(r, r) = std::sqrt(chi2(rng));
      for (Eigen::Index c = 0; c < r; ++c) A(r, c) = normal(rng);
    }
    // Sigma = (L_S A^-T)(L_S A^-T)' is IW(S_hat, alpha) when W ~ Wishart(S_hat^-1, alpha).
    const Eigen::MatrixXd a_inv = A.triangularView<Eigen::Lower>().solve(eye);
    const Eigen::MatrixXd G = s_chol * a_inv.transpose();
    Eigen::MatrixXd Z(k, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < k; ++r) Z(r, c) = normal(rng);
    }
    auto& d = draws[i];
    d.Sigma = G * G.transpose();
    d.Sigma = 0.5 * (d.Sigma + d.Sigma.transpose());
    d.B = post.B_hat + o_chol * Z * G.transpose();
  });
  return draws;
}

std::vector<Eigen::MatrixXd> lag_matrices(const Eigen::MatrixXd& B, const VarxSpec& spec, int n) {
  std::vector<Eigen::MatrixXd> A;
  A.reserve(spec.p);
  for (int l = 1; l <= spec.p; ++l) A.push_back(B.middleRows(spec.lag_row(n, l, 0), n));
  return A;
}

Eigen::MatrixXd dynamic_multipliers(std::span<const Eigen::MatrixXd> A, std::span<const Eigen::RowVectorXd> b,
                                    int H) {
  if (H < 0) throw Error(Errc::invalid_argument, "negative horizon");
  if (b.empty()) throw Error(Errc::invalid_argument, "no impact row");
  const auto n = b.front().size();
  const auto p = static_cast<int>(A.size());
  Eigen::MatrixXd path(n, H + 1);
  for (int h = 0; h <= H; ++h) {
    Eigen::RowVectorXd psi = h < static_cast<int>(b.size()) ? b[h] : Eigen::RowVectorXd::Zero(n);
    for (int l = 1; l <= std::min(h, p); ++l) psi += path.col(h - l).transpose() * A[l - 1];
    path.col(h) = psi.transpose();
  }
  return path;
}

Eigen::MatrixXd dynamic_multipliers(std::span<const Eigen::MatrixXd> A, const Eigen::RowVectorXd& b, int H) {
  return dynamic_multipliers(A, std::span<const Eigen::RowVectorXd>(&b, 1), H);
}

Eigen::VectorXd standardize_columns(Eigen::MatrixXd& exo) {
  Eigen::VectorXd scales(exo.cols());
  for (Eigen::Index e = 0; e < exo.cols(); ++e) {
    if (exo.rows() < 2) throw Error(Errc::insufficient_observations, "cannot standardize fewer than 2 values");
    const double mean = exo.col(e).mean();
    const double var = (exo.col(e).array() - mean).square().sum() / static_cast<double>(exo.rows() - 1);
    if (!(var > 0.0)) throw Error(Errc::zero_variance, "exogenous series " + std::to_string(e) + " is constant");
    scales(e) = std::sqrt(var);
    exo.col(e) /= scales(e);
  }
  return scales;
}

VarxFit fit(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec) {
  VarxFit out;
  out.spec = spec;
  Eigen::MatrixXd scaled = exo;
  out.shock_scales = standardize_columns(scaled);
  out.data = build_varx_data(panel, scaled, spec);
  const auto scales = ar_residual_scales(panel.values, spec.p);
  for (std::size_t j = 0; j < scales.degenerate.size(); ++j) {
    if (scales.degenerate[j]) {
      throw Error(Errc::degenerate_scale, "variable '" + panel.columns[j].name + "' has zero AR residual variance");
    }
  }
  out.prior = build_prior(spec, scales.sigma);
  out.posterior = posterior_moments(out.prior, out.data.Y, out.data.X);
  return out;
}

std::vector<Eigen::MatrixXd> irf_draws(const VarxFit& fit, const IrfOptions& options) {
  const auto& spec = fit.spec;
  const int n = static_cast<int>(fit.data.Y.cols());
  if (options.shock < 0 || options.shock >= spec.n_exo) throw Error(Errc::invalid_argument, "shock index out of range");
  const auto draws = sample_posterior(fit.posterior, options.n_draws, options.seed, options.threads, options.stream_offset);
  std::vector<Eigen::MatrixXd> paths(draws.size());
  parallel_for(static_cast<int>(draws.size()), options.threads, [&](int i) {
    const auto A = lag_matrices(draws[i].B, spec, n);
    std::vector<Eigen::RowVectorXd> impact;
    for (int q = 0; q <= spec.exo_lags; ++q) impact.push_back(draws[i].B.row(spec.exo_row(n, options.shock, q)));
    paths[i] = dynamic_multipliers(A, impact, spec.horizon);
  });
  return paths;
}

IrfBand estimate_irf(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec,
                     const IrfOptions& options) {
  const auto f = fit(panel, exo, spec);
  const auto paths = irf_draws(f, options);
  auto band = band_from_draws(paths, panel.names());
  band.engine = "bvar";
  band.shock_scale = f.shock_scales(options.shock);
  return band;
}

}  // namespace spillover::bvar
