#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/types.hpp"

namespace spillover {

/// Synthetic VARX with announcement-level surprises generated from two structural shocks.
///   y_t' = c' + sum_l y_{t-l}' A_l + mp_t b_mp + info_t b_info + e_t,   e_t ~ N(0, innovation_cov)
///   m_e  = impact * (mp_e, info_e)',                                    (mp_e, info_e) ~ N(0, I)
/// where mp_t and info_t are the within-month sums of event shocks.
struct DgpParams {
  std::vector<std::string> names;
  std::vector<Role> roles;
  std::vector<Eigen::MatrixXd> lags;  // A_1..A_p
  Eigen::RowVectorXd intercept;
  Eigen::RowVectorXd b_mp;
  Eigen::RowVectorXd b_info;
  Eigen::MatrixXd innovation_cov;
  Eigen::Matrix2d surprise_cov = Eigen::Matrix2d::Identity();  // S = C C'
  double theta = -0.7853981633974483;  // true rotation; impact = C R(theta)
  int T = 300;
  int events_per_month = 1;  // 1..4
  int burn_in = 200;
  YearMonth start{2000, 1};
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(b_mp.size()); }
  void validate() const;
};

struct DgpTruth {
  Eigen::Matrix2d impact;        // C R(theta), satisfies the sign restrictions
  double theta = 0.0;
  Eigen::MatrixXd mp_response;   // n x (H+1) multipliers per unit policy shock
  Eigen::MatrixXd info_response;
  double mp_monthly_sd = 1.0;    // sample sd of the monthly policy series
  double info_monthly_sd = 1.0;
};

struct SimulatedData {
  MonthlyPanel panel;
  EventSurprises surprises;
  ShockSeries shocks;     // true structural shocks per event
  MonthlyShocks monthly;  // true shocks summed by month
  DgpTruth truth;
};

/// Largest eigenvalue modulus of the companion matrix.
double companion_spectral_radius(std::span<const Eigen::MatrixXd> lags);

/// Stable three-variable benchmark: policy raises y1, information lowers it.
DgpParams default_dgp(int T = 300, std::uint64_t seed = 0);

SimulatedData simulate_dgp(const DgpParams& params, int truth_horizon = 36);

/// Truth record as CSV: variable,horizon,mp_response,info_response.
std::string truth_to_csv(const SimulatedData& sim);

}  // namespace spillover
