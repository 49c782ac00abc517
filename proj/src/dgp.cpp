#include "spillover/dgp.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "spillover/bvar.hpp"
#include "spillover/dataio.hpp"
#include "spillover/error.hpp"
#include "spillover/random.hpp"
#include "spillover/shockid.hpp"

namespace spillover {

void DgpParams::validate() const {
  const int k = n();
  if (k < 1 || lags.empty()) throw Error(Errc::invalid_argument, "DGP needs variables and at least one lag");
  if (static_cast<int>(names.size()) != k || static_cast<int>(roles.size()) != k || b_info.size() != k ||
      intercept.size() != k || innovation_cov.rows() != k || innovation_cov.cols() != k) {
    throw Error(Errc::invalid_argument, "DGP dimensions disagree");
  }
  for (const auto& A : lags) {
    if (A.rows() != k || A.cols() != k) throw Error(Errc::invalid_argument, "DGP lag matrix has wrong shape");
  }
  if (T < 1 || burn_in < 0) throw Error(Errc::invalid_argument, "DGP needs T >= 1");
  if (events_per_month < 1 || events_per_month > 4) {
    throw Error(Errc::invalid_argument, "events_per_month must be in 1..4");
  }
  const double radius = companion_spectral_radius(lags);
  if (!(radius < 1.0)) {
    throw Error(Errc::unstable_dgp, "companion spectral radius " + format_double(radius) + " >= 1");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  if (llt.info() != Eigen::Success) throw Error(Errc::not_positive_definite, "DGP innovation covariance");
  const auto impact = impact_matrix(cholesky2(surprise_cov), theta);
  if (!satisfies_sign_restrictions(impact)) {
    throw Error(Errc::invalid_argument, "DGP rotation violates the sign restrictions");
  }
}

double companion_spectral_radius(std::span<const Eigen::MatrixXd> lags) {
  const auto n = lags.front().rows();
  const auto p = static_cast<Eigen::Index>(lags.size());
  // Column-vector form: y_t = sum_l A_l' y_{t-l}.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
  for (Eigen::Index l = 0; l < p; ++l) companion.block(0, l * n, n, n) = lags[l].transpose();
  if (p > 1) companion.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

DgpParams default_dgp(int T, std::uint64_t seed) {
  DgpParams p;
  p.names = {"y1", "y2", "y3"};
  p.roles = {Role::domestic, Role::policy_rate, Role::foreign};
  Eigen::MatrixXd A1(3, 3);
  // Row-vector convention: entry (i, j) is the effect of y_i at t-1 on y_j at t.
  A1 << 0.70, 0.05, 0.00,
        0.10, 0.60, 0.05,
        0.00, 0.05, 0.50;
  p.lags = {A1};
  p.intercept = Eigen::RowVectorXd::Zero(3);
  p.intercept << 0.5, 0.2, -0.1;
  p.b_mp = Eigen::RowVectorXd(3);
  p.b_mp << 1.0, 0.5, -0.4;
  p.b_info = Eigen::RowVectorXd(3);
  p.b_info << -1.0, 0.3, 0.4;
  Eigen::MatrixXd cov(3, 3);
  cov << 0.25, 0.05, 0.00,
         0.05, 0.25, 0.05,
         0.00, 0.05, 0.25;
  p.innovation_cov = cov;
  p.T = T;
  p.seed = seed;
  return p;
}

SimulatedData simulate_dgp(const DgpParams& params, int truth_horizon) {
  params.validate();
  const int n = params.n();
  const int p = static_cast<int>(params.lags.size());
  const int total = params.burn_in + params.T;

  SimulatedData sim;
  sim.truth.theta = params.theta;
  sim.truth.impact = impact_matrix(cholesky2(params.surprise_cov), params.theta);
  sim.truth.mp_response = bvar::dynamic_multipliers(params.lags, params.b_mp, truth_horizon);
  sim.truth.info_response = bvar::dynamic_multipliers(params.lags, params.b_info, truth_horizon);

  auto shock_rng = substream(params.seed, 0);
  auto noise_rng = substream(params.seed, 1);
  std::normal_distribution<double> normal;

  static constexpr int kEventDays[] = {7, 14, 21, 28};
  Eigen::VectorXd mp_month = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd info_month = Eigen::VectorXd::Zero(total);
  std::vector<double> mp_events;
  std::vector<double> info_events;
  for (int t = 0; t < total; ++t) {
    for (int e = 0; e < params.events_per_month; ++e) {
      const double mp = normal(shock_rng);
      const double info = normal(shock_rng);
      mp_month(t) += mp;
      info_month(t) += info;
      if (t < params.burn_in) continue;
      const auto ym = params.start.plus(t - params.burn_in);
      const Eigen::Vector2d m = sim.truth.impact * Eigen::Vector2d(mp, info);
      sim.surprises.events.push_back({Day{ym.year, ym.month, kEventDays[e]}, m(0), m(1)});
      sim.shocks.dates.push_back({ym.year, ym.month, kEventDays[e]});
      mp_events.push_back(mp);
      info_events.push_back(info);
    }
  }
  sim.shocks.mp = Eigen::Map<Eigen::VectorXd>(mp_events.data(), static_cast<Eigen::Index>(mp_events.size()));
  sim.shocks.info = Eigen::Map<Eigen::VectorXd>(info_events.data(), static_cast<Eigen::Index>(info_events.size()));
  sim.shocks.method = IdentificationMethod::fixed_angle;
  sim.shocks.theta = params.theta;

  const Eigen::MatrixXd noise_chol = Eigen::LLT<Eigen::MatrixXd>(params.innovation_cov).matrixL();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total, n);
  Eigen::VectorXd z(n);
  for (int t = 0; t < total; ++t) {
    for (int j = 0; j < n; ++j) z(j) = normal(noise_rng);
    Eigen::RowVectorXd row = params.intercept + mp_month(t) * params.b_mp + info_month(t) * params.b_info +
                             (noise_chol * z).transpose();
    for (int l = 1; l <= p && l <= t; ++l) row += y.row(t - l) * params.lags[l - 1];
    y.row(t) = row;
  }

  sim.panel.start = params.start;
  for (int j = 0; j < n; ++j) sim.panel.columns.push_back({params.names[j], Transform::level, params.roles[j]});
  sim.panel.values = y.bottomRows(params.T);
  sim.monthly.start = params.start;
  sim.monthly.mp = mp_month.tail(params.T);
  sim.monthly.info = info_month.tail(params.T);

  auto sd = [](const Eigen::VectorXd& v) {
    if (v.size() < 2) return 1.0;
    return std::sqrt((v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1));
  };
  sim.truth.mp_monthly_sd = sd(sim.monthly.mp);
  sim.truth.info_monthly_sd = sd(sim.monthly.info);
  return sim;
}

std::string truth_to_csv(const SimulatedData& sim) {
  std::string out = "variable,horizon,mp_response,info_response\n";
  const auto& t = sim.truth;
  for (int i = 0; i < sim.panel.cols(); ++i) {
    for (Eigen::Index h = 0; h < t.mp_response.cols(); ++h) {
      out += sim.panel.columns[i].name + "," + std::to_string(h) + "," + format_double(t.mp_response(i, h)) + "," +
             format_double(t.info_response(i, h)) + "\n";
    }
  }
  return out;
}

}  // namespace spillover
