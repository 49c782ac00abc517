#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "test_support.hpp"
#include "spillover/dataio.hpp"
#include "spillover/shockid.hpp"

using namespace spillover;

namespace {

constexpr double kPi = std::numbers::pi;
const double kStep = 2.0 * kPi / 999.0;

EventSurprises make_events(const std::vector<std::pair<double, double>>& rows) {
  EventSurprises ev;
  Day d{2000, 1, 1};
  for (const auto& [ir, eq] : rows) {
    ev.events.push_back({d, ir, eq});
    d = Day{d.year_month().plus(1).year, d.year_month().plus(1).month, 1};
  }
  return ev;
}

EventSurprises events_from_matrix(const Eigen::MatrixX2d& m) {
  std::vector<std::pair<double, double>> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.emplace_back(m(i, 0), m(i, 1));
  return make_events(rows);
}

// Hand-expanded entries of C R(theta) for lower-triangular C; no library rotation used.
bool sign_oracle(double c11, double c21, double c22, double t) {
  const double a11 = c11 * std::cos(t);
  const double a12 = -c11 * std::sin(t);
  const double a21 = c21 * std::cos(t) + c22 * std::sin(t);
  const double a22 = -c21 * std::sin(t) + c22 * std::cos(t);
  return a11 > 0 && a21 < 0 && a12 > 0 && a22 > 0;
}

std::vector<double> brute_force_admissible(const Eigen::Matrix2d& C) {
  std::vector<double> out;
  for (int i = 0; i < 999; ++i) {
    const double t = -kPi + i * kStep;
    if (sign_oracle(C(0, 0), C(1, 0), C(1, 1), t)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("grid spacing and endpoints") {
  RotationGrid g;
  CHECK(g.size() == 999);
  CHECK(g.spacing() == doctest::Approx(kStep));
  CHECK(g.angle(0) == doctest::Approx(-kPi));
  CHECK(g.angle(998) < kPi);
}

TEST_CASE("sample covariance") {
  CHECK(sample_covariance(make_events({{2, 1}, {0, -1}, {-2, 0}})).isApprox((Eigen::Matrix2d() << 4, 1, 1, 1).finished()));
  const auto singular = sample_covariance(make_events({{1, 1}, {-1, -1}}));
  CHECK(singular.isApprox((Eigen::Matrix2d() << 2, 2, 2, 2).finished()));
  CHECK_ERRC(cholesky2(singular), Errc::not_positive_definite);
  CHECK_ERRC(sample_covariance(make_events({{1, 0}, {-1, 0}})), Errc::zero_variance);
  CHECK_ERRC(sample_covariance(make_events({{1, 0}})), Errc::too_few_events);
}

TEST_CASE("2x2 Cholesky") {
  CHECK(cholesky2(Eigen::Matrix2d::Identity()) == Eigen::Matrix2d::Identity());
  const Eigen::Matrix2d S = (Eigen::Matrix2d() << 4, 2, 2, 5).finished();
  const auto C = cholesky2(S);
  CHECK(C.isApprox((Eigen::Matrix2d() << 2, 0, 1, 2).finished()));
  CHECK((C * C.transpose()).isApprox(S));
  CHECK_ERRC(cholesky2((Eigen::Matrix2d() << 1, 1, 1, 1).finished()), Errc::not_positive_definite);
}

TEST_CASE("admissible set for identity factor is the open quarter arc") {
  const auto got = admissible_angles(Eigen::Matrix2d::Identity(), RotationGrid());
  const auto want = brute_force_admissible(Eigen::Matrix2d::Identity());
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
  CHECK(got.front() > -kPi / 2);
  CHECK(got.back() < 0.0);
  CHECK(got.front() - kStep <= -kPi / 2);
  CHECK(got.back() + kStep >= 0.0);
}

TEST_CASE("correlation 0.9 arc and its median") {
  const Eigen::Matrix2d C = (Eigen::Matrix2d() << 1, 0, 0.9, 0.43589).finished();
  const auto got = admissible_angles(C, RotationGrid());
  const auto want = brute_force_admissible(C);
  REQUIRE(got.size() == want.size());
  CHECK(got.front() == doctest::Approx(-1.5708).epsilon(kStep));
  CHECK(std::abs(got.back() - (-1.1214)) <= kStep);
  const double theta = median_rotation(got);
  CHECK(std::abs(theta - (-1.3461)) <= kStep);
  CHECK(theta == doctest::Approx(want[(want.size() - 1) / 2]));
}

TEST_CASE("steep factor still has a nonempty arc that re-checks") {
  const Eigen::Matrix2d C = (Eigen::Matrix2d() << 1, 0, -5, 0.1).finished();
  const auto got = admissible_angles(C, RotationGrid());
  REQUIRE(!got.empty());
  for (double t : got) CHECK(sign_oracle(1, -5, 0.1, t));
  CHECK(got.size() == brute_force_admissible(C).size());
}

TEST_CASE("median rotation edge cases") {
  const auto identity = admissible_angles(Eigen::Matrix2d::Identity(), RotationGrid());
  CHECK(std::abs(median_rotation(identity) + kPi / 4) <= kStep);
  const std::vector<double> single{0.3};
  CHECK(median_rotation(single) == 0.3);
  CHECK_ERRC(median_rotation(std::vector<double>{}), Errc::empty_admissible_set);
  const std::vector<double> split{-1.0, -1.0 + kStep, 1.0, 1.0 + kStep};
  CHECK_ERRC(median_rotation(split, kStep), Errc::non_contiguous_arc);
  // An arc straddling the +-pi seam is unwrapped before taking the middle.
  const std::vector<double> wrap{kPi - 2 * kStep, kPi - kStep, -kPi, -kPi + kStep, -kPi + 2 * kStep};
  CHECK(median_rotation(wrap, kStep) == doctest::Approx(-kPi));
}

TEST_CASE("decomposition at -pi/4 with identity covariance") {
  // Events built so the sample covariance is exactly I and the mean is zero.
  const auto ev = make_events({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const auto dec = identify_median(ev);
  REQUIRE(dec.covariance.isApprox(Eigen::Matrix2d::Identity() * (2.0 / 3.0)));
  const auto s = decompose(ev, dec, -kPi / 4);
  const double r = std::sqrt(2.0 / 3.0);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double ir = ev.events[i].ir / r;
    const double eq = ev.events[i].eq / r;
    CHECK(s.mp(i) == doctest::Approx((ir - eq) / std::sqrt(2.0)));
    CHECK(s.info(i) == doctest::Approx((ir + eq) / std::sqrt(2.0)));
  }
  CHECK(s.method == IdentificationMethod::fixed_angle);
  CHECK_ERRC(decompose(ev, dec, 0.5), Errc::invalid_argument);
}

TEST_CASE("zero demeaned surprises map to zero shocks") {
  const auto z = structural_shocks(Eigen::Matrix2d::Identity(), Eigen::Vector2d(0.3, -0.2), -0.5,
                                   Eigen::MatrixX2d::Constant(5, 2, 0.0).rowwise() + Eigen::RowVector2d(0.3, -0.2));
  CHECK(z.isZero(0.0));
}

TEST_CASE("synthesis then inversion recovers the structural shocks") {
  std::mt19937_64 rng(42);
  const int n = 400;
  Eigen::MatrixXd U = testing::randn(rng, n, 2);
  // Whiten U exactly so its sample covariance is I and its mean is 0.
  U = U.rowwise() - U.colwise().mean();
  Eigen::Matrix2d cov = U.transpose() * U / (n - 1);
  U = U * Eigen::Matrix2d(cov.llt().matrixL()).inverse().transpose();
  const Eigen::Matrix2d S = (Eigen::Matrix2d() << 2.0, 0.6, 0.6, 1.5).finished();
  const Eigen::Matrix2d C = cholesky2(S);
  const double theta0 = -0.6;
  const Eigen::MatrixX2d M = U * (C * rotation(theta0)).transpose();
  const auto ev = events_from_matrix(M);
  const auto dec = identify_median(ev);
  CHECK(dec.chol.isApprox(C, 1e-10));
  const auto s = decompose(ev, dec, theta0);
  CHECK((s.mp - U.col(0)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((s.info - U.col(1)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("median decomposition tags method and angle") {
  std::mt19937_64 rng(3);
  const auto ev = events_from_matrix(testing::randn(rng, 50, 2));
  const auto dec = identify_median(ev);
  const auto s = decompose(ev, dec.admissible.front());
  CHECK(s.method == IdentificationMethod::fixed_angle);
  CHECK_ERRC(decompose(ev, 0.0), Errc::invalid_argument);
  const auto m = decompose(ev, dec, dec.theta_star);
  CHECK(m.method == IdentificationMethod::median_rotation);
  CHECK(m.theta == dec.theta_star);
  const auto csv = decomposition_report_csv(ev, m);
  CHECK(csv.rfind("date,ir,eq,mp,info,method,theta_star\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
}

TEST_CASE("poor man's sign restriction") {
  const auto s = poor_mans_split(make_events({{5, -0.3}, {5, 0.3}, {0, 0.2}, {-2, -1}, {-2, 1}}));
  CHECK(s.mp(0) == 5);
  CHECK(s.info(0) == 0);
  CHECK(s.mp(1) == 0);
  CHECK(s.info(1) == 5);
  CHECK(s.mp(2) == 0);
  CHECK(s.info(2) == 0);
  CHECK(s.info(3) == -2);
  CHECK(s.mp(4) == -2);
  CHECK(std::isnan(s.theta));
  CHECK(decomposition_report_csv(make_events({{1, -1}}), poor_mans_split(make_events({{1, -1}}))).find(",NA\n") !=
        std::string::npos);
}

TEST_CASE("uniform draws from the admissible set") {
  const std::vector<double> single{-0.7};
  CHECK(draw_admissible(single, 5, 9) == std::vector<double>(5, -0.7));

  std::vector<double> set(100);
  for (int i = 0; i < 100; ++i) set[i] = -1.5 + 0.01 * i;
  const auto draws = draw_admissible(set, 100000, 2024);
  std::map<double, int> counts;
  for (double d : draws) ++counts[d];
  CHECK(counts.size() == 100);
  for (const auto& [angle, c] : counts) {
    CHECK(std::abs(c / 100000.0 - 0.01) <= 0.005);
  }
  CHECK(draw_admissible(set, 10, 7) == draw_admissible(set, 10, 7));
  CHECK(draw_admissible(set, 10, 7) != draw_admissible(set, 10, 8));
  CHECK_ERRC(draw_admissible(std::vector<double>{}, 3, 1), Errc::empty_admissible_set);
}
