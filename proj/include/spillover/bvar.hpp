#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spillover/irf.hpp"
#include "spillover/types.hpp"

namespace spillover::bvar {

struct Hyperparams {
  double own_lag_mean = 0.8;
  double lambda1 = 0.1;  // overall tightness
  double lambda3 = 1.0;  // lag decay
  double lambda4 = 1e5;  // deterministic and exogenous terms; effectively flat
};

/// Regressor layout of one row of X:
///   [y_{t-1}' ... y_{t-p}' | const trend covid | x_t' x_{t-1}' ... x_{t-q}']
/// with q = exo_lags. Disabled deterministic terms are left out.
struct VarxSpec {
  int p = 3;
  bool constant = true;
  bool trend = true;
  bool covid = true;
  int n_exo = 1;
  int exo_lags = 0;
  int horizon = 36;
  Hyperparams hyper;

  int n_deterministic() const { return int(constant) + int(trend) + int(covid); }
  int k(int n) const { return n * p + n_deterministic() + n_exo * (exo_lags + 1); }
  int lag_row(int n, int lag, int var) const { return (lag - 1) * n + var; }
  int exo_row(int n, int exo, int lag = 0) const { return n * p + n_deterministic() + lag * n_exo + exo; }
  void validate() const;
};

struct VarxData {
  Eigen::MatrixXd Y;  // T_eff x n
  Eigen::MatrixXd X;  // T_eff x k
  YearMonth first;    // month of the first row of Y
};

/// Stacks the regression for a panel and its T x n_exo exogenous series; the first
/// max(p, exo_lags) months are consumed as initial conditions.
VarxData build_varx_data(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec);

struct ArScales {
  Eigen::VectorXd sigma;
  std::vector<bool> degenerate;  // zero residual variance
};

/// Residual standard deviation of a univariate AR(p) with constant for each column
/// (divisor: number of residuals, T - p). Throws insufficient_observations unless T > p + 2.
ArScales ar_residual_scales(const Eigen::MatrixXd& Y, int p);

struct NormalWishartPrior {
  Eigen::MatrixXd B0;         // k x n prior mean
  Eigen::VectorXd precision;  // diagonal of Omega0^-1; zero entries mean flat
  Eigen::MatrixXd S0;         // n x n scale
  double alpha0 = 0.0;        // degrees of freedom

  Eigen::VectorXd omega0_diagonal() const { return precision.cwiseInverse(); }
};

NormalWishartPrior build_prior(const VarxSpec& spec, const Eigen::VectorXd& sigma);

struct PosteriorDraw {
  Eigen::MatrixXd B;
  Eigen::MatrixXd Sigma;
};

struct VarxPosterior {
  Eigen::MatrixXd B_hat;
  Eigen::MatrixXd Omega_hat;
  Eigen::MatrixXd S_hat;
  double alpha_hat = 0.0;
  double ridge = 0.0;  // added to Omega0^-1 + X'X when it was numerically singular
  std::vector<PosteriorDraw> draws;
};

/// Conjugate update. S_hat is assembled as S0 + E'E + (B_hat - B0)' Omega0^-1 (B_hat - B0),
/// algebraically equal to S0 + Y'Y + B0' Omega0^-1 B0 - B_hat' Omega_hat^-1 B_hat.
VarxPosterior posterior_moments(const NormalWishartPrior& prior, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X);

/// Sigma ~ IW(S_hat, alpha_hat), B | Sigma ~ MN(B_hat, Omega_hat, Sigma). Draw i uses random
/// substream `stream_offset + i`, so output is identical for every thread count.
std::vector<PosteriorDraw> sample_posterior(const VarxPosterior& post, int n_draws, std::uint64_t seed,
                                            int threads = 1, std::uint64_t stream_offset = 0);

/// Lag matrices A_1..A_p (n x n) read out of a k x n coefficient matrix.
std::vector<Eigen::MatrixXd> lag_matrices(const Eigen::MatrixXd& B, const VarxSpec& spec, int n);

/// Psi_0 = b, Psi_h = sum_{l=1}^{min(h,p)} Psi_{h-l} A_l. Returns n x (H+1), column h = Psi_h'.
Eigen::MatrixXd dynamic_multipliers(std::span<const Eigen::MatrixXd> A, const Eigen::RowVectorXd& b, int H);

/// As above with distributed-lag impact rows b_0..b_q added at their horizons.
Eigen::MatrixXd dynamic_multipliers(std::span<const Eigen::MatrixXd> A, std::span<const Eigen::RowVectorXd> b,
                                    int H);

/// Standardizes each column to unit sample variance (divisor T-1). Returns the scales.
Eigen::VectorXd standardize_columns(Eigen::MatrixXd& exo);

struct IrfOptions {
  int n_draws = 2000;
  std::uint64_t seed = 0;
  int threads = 1;
  int shock = 0;  // which exogenous column is the impulse
  std::uint64_t stream_offset = 0;
};

struct VarxFit {
  VarxSpec spec;
  VarxData data;
  NormalWishartPrior prior;
  VarxPosterior posterior;
  Eigen::VectorXd shock_scales;  // raw sd of each exogenous series
};

/// Standardizes exogenous series, scales the prior by AR residual sds, and computes moments.
VarxFit fit(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec);

/// Multiplier paths (n x (H+1)) of the chosen shock for each posterior draw.
std::vector<Eigen::MatrixXd> irf_draws(const VarxFit& fit, const IrfOptions& options);

/// Posterior IRF band to a one-standard-deviation exogenous shock.
IrfBand estimate_irf(const MonthlyPanel& panel, const Eigen::MatrixXd& exo, const VarxSpec& spec,
                     const IrfOptions& options);

}  // namespace spillover::bvar
