#include "spillover/localproj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"
#include "spillover/parallel.hpp"
#include "spillover/regression.hpp"

namespace spillover::lp {

int LpSpec::max_lag() const { return std::max({shock_lags, dep_lags, domestic_lags, foreign_lags}); }

void LpSpec::validate() const {
  if (horizon < 0) throw Error(Errc::invalid_argument, "negative LP horizon");
  if (shock_lags < 0 || dep_lags < 0 || domestic_lags < 0 || foreign_lags < 0) {
    throw Error(Errc::invalid_argument, "negative LP lag count");
  }
  if (bandwidth_offset < 0) throw Error(Errc::invalid_argument, "negative bandwidth offset");
  if (!(z > 0.0)) throw Error(Errc::invalid_argument, "critical value must be positive");
}

namespace {

std::vector<int> control_columns(const MonthlyPanel& panel, const std::vector<std::string>& names, int dependent) {
  std::vector<int> out;
  for (const auto& name : names) {
    const int j = panel.index_of(name);
    if (j != dependent) out.push_back(j);
  }
  return out;
}

LpDesign build_design(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent, int h,
                      const LpSpec& spec, int first_row, int last_row) {
  const int T = panel.rows();
  if (shock.size() != T) throw Error(Errc::invalid_argument, "shock length differs from the panel");
  const int dep = panel.index_of(dependent);
  const auto domestic = control_columns(panel, spec.domestic_controls, dep);
  const auto foreign = control_columns(panel, spec.foreign_controls, dep);
  const int rows = last_row - first_row + 1;
  if (rows < 1) {
    throw Error(Errc::empty_design, "no usable rows for '" + dependent + "' at horizon " + std::to_string(h));
  }
  const int k = 1 + spec.shock_lags + spec.dep_lags + static_cast<int>(domestic.size()) * spec.domestic_lags +
                static_cast<int>(foreign.size()) * spec.foreign_lags + int(spec.constant) + int(spec.trend) +
                int(spec.covid);
  const auto det = build_deterministics(panel.start, T);

  LpDesign d;
  d.y.resize(rows);
  d.X.resize(rows, k);
  d.dates.reserve(rows);
  const auto& v = panel.values;
  for (int r = 0; r < rows; ++r) {
    const int t = first_row + r;
    d.y(r) = v(t + h, dep);
    d.dates.push_back(panel.month_at(t));
    int c = 0;
    d.X(r, c++) = shock(t);
    for (int j = 1; j <= spec.shock_lags; ++j) d.X(r, c++) = shock(t - j);
    for (int j = 1; j <= spec.dep_lags; ++j) d.X(r, c++) = v(t - j, dep);
    for (int col : domestic) {
      for (int j = 1; j <= spec.domestic_lags; ++j) d.X(r, c++) = v(t - j, col);
    }
    for (int col : foreign) {
      for (int j = 1; j <= spec.foreign_lags; ++j) d.X(r, c++) = v(t - j, col);
    }
    if (spec.constant) d.X(r, c++) = 1.0;
    if (spec.trend) d.X(r, c++) = det.trend(t);
    if (spec.covid) d.X(r, c++) = det.covid(t);
  }
  return d;
}

double sample_sd(const Eigen::VectorXd& x) {
  if (x.size() < 2) throw Error(Errc::insufficient_observations, "cannot standardize fewer than 2 values");
  const double mean = x.mean();
  return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(x.size() - 1));
}

// Regressors that are identically zero on the estimation rows (the COVID dummy in a pre-2020
// window) carry no information and would only trigger the ridge fallback.
Eigen::MatrixXd drop_zero_columns(const Eigen::MatrixXd& X) {
  std::vector<Eigen::Index> keep{0};
  for (Eigen::Index j = 1; j < X.cols(); ++j) {
    if (!X.col(j).isZero(0.0)) keep.push_back(j);
  }
  if (static_cast<Eigen::Index>(keep.size()) == X.cols()) return X;
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = X.col(keep[c]);
  return out;
}

}  // namespace

LpDesign build_lp_design(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent, int h,
                         const LpSpec& spec) {
  spec.validate();
  if (h < 0) throw Error(Errc::invalid_argument, "negative horizon");
  const int T = panel.rows();
  const int last = T - 1 - (spec.common_sample ? std::max(h, spec.horizon) : h);
  return build_design(panel, shock, dependent, h, spec, spec.max_lag(), last);
}

LpResult lp_irf(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent,
                const LpSpec& spec_in, int threads) {
  LpSpec spec = spec_in;
  spec.validate();
  Eigen::VectorXd s = shock;
  LpResult result;
  result.variable = dependent;
  if (spec.standardize) {
    const double sd = sample_sd(s);
    if (!(sd > 0.0)) throw Error(Errc::zero_variance, "shock series is constant");
    s /= sd;
    result.shock_scale = sd;
  }
  if (spec.select_lags_aic) {
    const int J = select_lag_order_aic(panel, s, dependent, spec);
    spec.shock_lags = spec.dep_lags = spec.domestic_lags = spec.foreign_lags = J;
  }

  result.horizons.resize(spec.horizon + 1);
  parallel_for(spec.horizon + 1, threads, [&](int h) {
    const auto design = build_lp_design(panel, s, dependent, h, spec);
    const Eigen::MatrixXd X = drop_zero_columns(design.X);
    const auto fit = ols(X, design.y);
    const int bandwidth = spec.inference == Inference::newey_west ? h + spec.bandwidth_offset : 0;
    const auto se = hac_se(X, fit.residuals, bandwidth);
    result.horizons[h] = {fit.coef(0), se(0), static_cast<int>(design.y.size())};
  });
  return result;
}

IrfBand lp_band(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const LpSpec& spec, int threads) {
  IrfBand band;
  band.variables = panel.names();
  band.horizon = spec.horizon;
  band.engine = "local_projection";
  const auto n = panel.cols();
  band.lo.resize(n, spec.horizon + 1);
  band.point.resize(n, spec.horizon + 1);
  band.hi.resize(n, spec.horizon + 1);
  for (int i = 0; i < n; ++i) {
    const auto res = lp_irf(panel, shock, band.variables[i], spec, threads);
    band.shock_scale = res.shock_scale;
    for (int h = 0; h <= spec.horizon; ++h) {
      const auto& e = res.horizons[h];
      band.point(i, h) = e.beta;
      band.lo(i, h) = e.beta - spec.z * e.se;
      band.hi(i, h) = e.beta + spec.z * e.se;
    }
  }
  return band;
}

int select_lag_order_aic(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent,
                         const LpSpec& spec, int max_lag) {
  if (max_lag < 1) throw Error(Errc::invalid_argument, "AIC search needs max_lag >= 1");
  int best = 1;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int J = 1; J <= max_lag; ++J) {
    LpSpec trial = spec;
    trial.shock_lags = trial.dep_lags = trial.domestic_lags = trial.foreign_lags = J;
    const auto d = build_design(panel, shock, dependent, 0, trial, max_lag, panel.rows() - 1);
    const Eigen::MatrixXd X = drop_zero_columns(d.X);
    const auto fit = ols(X, d.y);
    const double n = static_cast<double>(d.y.size());
    const double aic = n * std::log(fit.residuals.squaredNorm() / n) + 2.0 * static_cast<double>(X.cols());
    if (aic < best_aic) {
      best_aic = aic;
      best = J;
    }
  }
  return best;
}

}  // namespace spillover::lp
