#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/irf.hpp"
#include "spillover/types.hpp"

namespace spillover::lp {

enum class Inference { newey_west, white };

struct LpSpec {
  int horizon = 36;
  int shock_lags = 3;
  int dep_lags = 3;
  int domestic_lags = 3;
  int foreign_lags = 3;
  std::vector<std::string> domestic_controls;  // the dependent variable is skipped if listed
  std::vector<std::string> foreign_controls;
  Inference inference = Inference::newey_west;
  int bandwidth_offset = 0;  // Newey-West bandwidth at horizon h is h + offset
  double z = 1.645;          // two-sided 90% normal critical value
  bool constant = true;
  bool trend = true;
  bool covid = true;
  bool common_sample = false;  // every horizon uses the rows available at h = horizon
  bool standardize = true;     // rescale the shock to unit sample variance
  bool select_lags_aic = false;

  int max_lag() const;
  void validate() const;
};

struct LpDesign {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;             // column 0 is the contemporaneous shock
  std::vector<YearMonth> dates;  // month t of each row; y holds t + h
};

/// Row t: y = dependent_{t+h}; X = [shock_t, shock_{t-1..t-Ji}, dependent_{t-1..t-Jy},
/// domestic lags, foreign lags, constant, trend_t, covid_t]. Rows start at the largest lag.
LpDesign build_lp_design(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent, int h,
                         const LpSpec& spec);

struct HorizonEstimate {
  double beta = 0.0;
  double se = 0.0;
  int n_obs = 0;
};

struct LpResult {
  std::string variable;
  std::vector<HorizonEstimate> horizons;
  double shock_scale = 1.0;
};

/// One regression per horizon for a single dependent variable.
LpResult lp_irf(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent,
                const LpSpec& spec, int threads = 1);

/// beta_h +/- z * se_h for every panel column, tagged engine = "local_projection".
IrfBand lp_band(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const LpSpec& spec, int threads = 1);

/// Lag count in 1..max_lag (applied to all lag groups) minimising the AIC of the impact
/// regression, fitted on the common sample of the longest candidate.
int select_lag_order_aic(const MonthlyPanel& panel, const Eigen::VectorXd& shock, const std::string& dependent,
                         const LpSpec& spec, int max_lag = 6);

}  // namespace spillover::lp
