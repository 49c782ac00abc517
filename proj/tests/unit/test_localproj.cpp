#include <cmath>

#include "test_support.hpp"
#include "spillover/localproj.hpp"

using namespace spillover;
using namespace spillover::lp;

namespace {

MonthlyPanel panel_of(const Eigen::MatrixXd& values, YearMonth start = {1995, 1}) {
  MonthlyPanel p;
  p.start = start;
  for (Eigen::Index j = 0; j < values.cols(); ++j) p.columns.push_back({"v" + std::to_string(j)});
  p.values = values;
  return p;
}

LpSpec bare_spec(int lags) {
  LpSpec s;
  s.shock_lags = s.dep_lags = s.domestic_lags = s.foreign_lags = lags;
  s.standardize = false;
  return s;
}

}  // namespace

TEST_CASE("design rows follow the lag and horizon trimming") {
  std::mt19937_64 rng(1);
  const auto panel = panel_of(testing::randn(rng, 10, 2));
  const Eigen::VectorXd shock = testing::randn(rng, 10, 1);
  auto spec = bare_spec(1);
  spec.domestic_controls = {"v1"};
  const auto d = build_lp_design(panel, shock, "v0", 2, spec);
  // Rows t = 1..7 (0-based): one lag consumed at the start, two leads at the end.
  REQUIRE(d.X.rows() == 7);
  CHECK(d.dates.front() == panel.month_at(1));
  CHECK(d.dates.back() == panel.month_at(7));
  CHECK(d.y(0) == panel.values(3, 0));
  CHECK(d.y(6) == panel.values(9, 0));
  CHECK(d.X(0, 0) == shock(1));
  CHECK(d.X(0, 1) == shock(0));               // shock lag
  CHECK(d.X(0, 2) == panel.values(0, 0));     // own lag
  CHECK(d.X(0, 3) == panel.values(0, 1));     // control lag
  CHECK(d.X.cols() == 4 + 3);
}

TEST_CASE("minimal design is shock plus deterministics over the full sample") {
  std::mt19937_64 rng(2);
  const auto panel = panel_of(testing::randn(rng, 8, 1), {2020, 1});
  const Eigen::VectorXd shock = testing::randn(rng, 8, 1);
  const auto d = build_lp_design(panel, shock, "v0", 0, bare_spec(0));
  REQUIRE(d.X.rows() == 8);
  REQUIRE(d.X.cols() == 4);
  CHECK(d.X.col(0) == shock);
  CHECK(d.X.col(1).isOnes());
  CHECK(d.X(7, 2) == 8.0);
  CHECK(d.X(1, 3) == 0.0);
  CHECK(d.X(2, 3) == 1.0);  // 2020-03
}

TEST_CASE("dependent variable listed as a control is not duplicated") {
  std::mt19937_64 rng(3);
  const auto panel = panel_of(testing::randn(rng, 30, 2));
  auto spec = bare_spec(2);
  spec.domestic_controls = {"v0", "v1"};
  const auto d = build_lp_design(panel, testing::randn(rng, 30, 1), "v0", 0, spec);
  CHECK(d.X.cols() == 1 + 2 + 2 + 2 + 3);
}

TEST_CASE("infeasible trimming is an empty design") {
  std::mt19937_64 rng(4);
  const auto panel = panel_of(testing::randn(rng, 3, 1));
  auto spec = bare_spec(0);
  spec.dep_lags = 3;
  CHECK_ERRC(build_lp_design(panel, Eigen::VectorXd::Ones(3), "v0", 0, spec), Errc::empty_design);
}

TEST_CASE("common sample fixes the row set across horizons") {
  std::mt19937_64 rng(5);
  const auto panel = panel_of(testing::randn(rng, 80, 1));
  const Eigen::VectorXd s = testing::randn(rng, 80, 1);
  auto spec = bare_spec(2);
  spec.horizon = 10;
  spec.common_sample = true;
  const auto r = lp_irf(panel, s, "v0", spec);
  for (const auto& h : r.horizons) CHECK(h.n_obs == 80 - 2 - 10);
  spec.common_sample = false;
  const auto q = lp_irf(panel, s, "v0", spec);
  CHECK(q.horizons[0].n_obs == 78);
  CHECK(q.horizons[10].n_obs == 68);
}

TEST_CASE("AR(1) propagation is recovered") {
  std::mt19937_64 rng(6);
  const int T = 2000;
  const Eigen::VectorXd s = testing::randn(rng, T, 1);
  const Eigen::VectorXd e = testing::randn(rng, T, 1);
  Eigen::MatrixXd y(T, 1);
  y(0, 0) = s(0) + e(0);
  for (int t = 1; t < T; ++t) y(t, 0) = 0.5 * y(t - 1, 0) + s(t) + e(t);
  auto spec = bare_spec(1);
  spec.horizon = 10;
  spec.trend = spec.covid = false;
  const auto r = lp_irf(panel_of(y), s, "v0", spec, 4);
  for (int h = 0; h <= 10; ++h) {
    CHECK_MESSAGE(std::abs(r.horizons[h].beta - std::pow(0.5, h)) <= 2.0 * r.horizons[h].se, "h=" << h);
  }
}

TEST_CASE("independent shock has no detectable effect") {
  std::mt19937_64 rng(7);
  const int T = 1500;
  Eigen::MatrixXd y(T, 1);
  const Eigen::VectorXd e = testing::randn(rng, T, 1);
  y(0, 0) = e(0);
  for (int t = 1; t < T; ++t) y(t, 0) = 0.6 * y(t - 1, 0) + e(t);
  const Eigen::VectorXd s = testing::randn(rng, T, 1);
  auto spec = bare_spec(3);
  spec.horizon = 20;
  const auto r = lp_irf(panel_of(y), s, "v0", spec);
  int inside = 0;
  for (const auto& h : r.horizons) inside += std::abs(h.beta) <= 2.0 * h.se;
  CHECK(inside >= 0.9 * 21);
}

TEST_CASE("identity response has unit impact and zero error") {
  std::mt19937_64 rng(8);
  const Eigen::VectorXd s = testing::randn(rng, 200, 1);
  auto spec = bare_spec(0);
  spec.horizon = 0;
  const auto r = lp_irf(panel_of(s), s, "v0", spec);
  CHECK(r.horizons[0].beta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.horizons[0].se < 1e-10);
}

TEST_CASE("bands, standardization and thread independence") {
  std::mt19937_64 rng(9);
  const int T = 300;
  const Eigen::VectorXd s = 3.0 * testing::randn(rng, T, 1).array();
  Eigen::MatrixXd y = testing::randn(rng, T, 2);
  y.col(0) += 0.5 * s;
  LpSpec spec;
  spec.horizon = 6;
  const auto panel = panel_of(y);
  const auto band = lp_band(panel, s, spec, 1);
  CHECK(band.engine == "local_projection");
  CHECK(band.shock_scale == doctest::Approx(3.0).epsilon(0.1));
  // Impact per one-sd shock is about 0.5 * 3.
  CHECK(band.point(0, 0) == doctest::Approx(1.5).epsilon(0.1));
  CHECK(((band.hi - band.point) - (band.point - band.lo)).cwiseAbs().maxCoeff() < 1e-12);
  const auto again = lp_band(panel, s, spec, 4);
  CHECK(again.point == band.point);
  CHECK(again.hi == band.hi);
}

TEST_CASE("Newey-West and White inference differ only in the errors") {
  std::mt19937_64 rng(10);
  const auto panel = panel_of(testing::randn(rng, 150, 1));
  const Eigen::VectorXd s = testing::randn(rng, 150, 1);
  LpSpec a;
  a.horizon = 4;
  LpSpec b = a;
  b.inference = Inference::white;
  const auto ra = lp_irf(panel, s, "v0", a);
  const auto rb = lp_irf(panel, s, "v0", b);
  CHECK(ra.horizons[0].se == doctest::Approx(rb.horizons[0].se));  // bandwidth h = 0
  CHECK(ra.horizons[3].beta == rb.horizons[3].beta);
  CHECK(ra.horizons[3].se != rb.horizons[3].se);
}

TEST_CASE("AIC prefers the true lag order") {
  std::mt19937_64 rng(11);
  const int T = 3000;
  const Eigen::VectorXd e = testing::randn(rng, T, 1);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(T, 1);
  for (int t = 2; t < T; ++t) y(t, 0) = 0.3 * y(t - 1, 0) + 0.5 * y(t - 2, 0) + e(t);
  LpSpec spec;
  spec.horizon = 0;
  const int chosen = select_lag_order_aic(panel_of(y), testing::randn(rng, T, 1), "v0", spec, 6);
  CHECK(chosen >= 2);
}

TEST_CASE("spec validation") {
  LpSpec s;
  s.horizon = -1;
  CHECK_ERRC(s.validate(), Errc::invalid_argument);
  s = LpSpec{};
  s.z = 0.0;
  CHECK_ERRC(s.validate(), Errc::invalid_argument);
}
