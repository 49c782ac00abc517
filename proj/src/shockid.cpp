#include "spillover/shockid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"
#include "spillover/random.hpp"

namespace spillover {

using std::numbers::pi;

RotationGrid::RotationGrid(int n_angles) : n_(n_angles), spacing_(2.0 * pi / n_angles) {
  if (n_angles < 1) throw Error(Errc::invalid_argument, "rotation grid needs at least one angle");
}

double RotationGrid::angle(int i) const { return -pi + i * spacing_; }

std::vector<double> RotationGrid::angles() const {
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = angle(i);
  return out;
}

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix2d impact_matrix(const Eigen::Matrix2d& chol, double theta) { return chol * rotation(theta); }

bool satisfies_sign_restrictions(const Eigen::Matrix2d& a) {
  // Entries within rounding of zero are unsigned: cos(-pi/2) evaluates to +6e-17, not 0.
  const double eps = 1e-12 * a.cwiseAbs().maxCoeff();
  return a(0, 0) > eps && a(1, 0) < -eps && a(0, 1) > eps && a(1, 1) > eps;
}

Eigen::Matrix2d sample_covariance(const EventSurprises& events) {
  const auto n = static_cast<Eigen::Index>(events.size());
  if (n < 2) throw Error(Errc::too_few_events, "need at least 2 events, got " + std::to_string(n));
  Eigen::MatrixX2d m = events.matrix();
  Eigen::RowVector2d mean = m.colwise().mean();
  m.rowwise() -= mean;
  Eigen::Matrix2d s = (m.transpose() * m) / static_cast<double>(n - 1);
  s(0, 1) = s(1, 0);
  const char* names[] = {"ir", "eq"};
  for (int j = 0; j < 2; ++j) {
    if (!(s(j, j) > 1e-26 * mean(j) * mean(j))) {
      throw Error(Errc::zero_variance, std::string(names[j]) + " surprises have zero variance");
    }
  }
  return s;
}

Eigen::Matrix2d cholesky2(const Eigen::Matrix2d& S) {
  const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  if (!(S(0, 0) > 0.0) || !(det > 0.0)) {
    throw Error(Errc::not_positive_definite, "2x2 covariance is not positive definite");
  }
  const double c11 = std::sqrt(S(0, 0));
  Eigen::Matrix2d c;
  c << c11, 0.0, S(1, 0) / c11, std::sqrt(det / S(0, 0));
  return c;
}

std::vector<double> admissible_angles(const Eigen::Matrix2d& chol, const RotationGrid& grid) {
  std::vector<double> out;
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.angle(i);
    if (satisfies_sign_restrictions(impact_matrix(chol, theta))) out.push_back(theta);
  }
  return out;
}

double median_rotation(std::span<const double> admissible, double spacing) {
  if (admissible.empty()) throw Error(Errc::empty_admissible_set, "no admissible rotation");
  std::vector<double> a(admissible.begin(), admissible.end());
  std::sort(a.begin(), a.end());
  const std::size_t m = a.size();
  if (m == 1) return a[0];

  // A break is any circular gap wider than one and a half grid steps.
  const double tol = 1.5 * spacing;
  std::size_t breaks = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (a[i + 1] - a[i] > tol) {
      ++breaks;
      start = i + 1;
    }
  }
  if (a[0] + 2.0 * pi - a[m - 1] > tol) {
    ++breaks;
    start = 0;
  }
  if (breaks > 1) {
    throw Error(Errc::non_contiguous_arc, "admissible set splits into " + std::to_string(breaks) + " arcs");
  }

  std::vector<double> unwrapped(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t i = (start + k) % m;
    unwrapped[k] = a[i] + (i < start ? 2.0 * pi : 0.0);
  }
  double theta = unwrapped[(m - 1) / 2];
  if (theta >= pi) theta -= 2.0 * pi;
  return theta;
}

Decomposition identify_median(const EventSurprises& events, const RotationGrid& grid) {
  Decomposition dec;
  dec.mean = events.matrix().colwise().mean().transpose();
  dec.covariance = sample_covariance(events);
  dec.chol = cholesky2(dec.covariance);
  dec.admissible = admissible_angles(dec.chol, grid);
  dec.theta_star = median_rotation(dec.admissible, grid.spacing());
  dec.method = IdentificationMethod::median_rotation;
  return dec;
}

Eigen::MatrixX2d structural_shocks(const Eigen::Matrix2d& chol, const Eigen::Vector2d& mean, double theta,
                                   const Eigen::MatrixX2d& surprises) {
  if (!(chol(0, 0) != 0.0 && chol(1, 1) != 0.0)) throw Error(Errc::singular_matrix, "singular Cholesky factor");
  Eigen::MatrixX2d centered = surprises.rowwise() - mean.transpose();
  // Rows: u_t' = (C^-1 m_t)' R = m_t' C^-T R.
  Eigen::MatrixX2d whitened =
      chol.triangularView<Eigen::Lower>().solve(centered.transpose()).transpose();
  return whitened * rotation(theta);
}

ShockSeries decompose(const EventSurprises& events, const Decomposition& dec, double theta) {
  if (!satisfies_sign_restrictions(impact_matrix(dec.chol, theta))) {
    throw Error(Errc::invalid_argument, "angle " + format_double(theta) + " violates the sign restrictions");
  }
  Eigen::MatrixX2d u = structural_shocks(dec.chol, dec.mean, theta, events.matrix());
  ShockSeries out;
  out.dates.reserve(events.size());
  for (const auto& e : events.events) out.dates.push_back(e.date);
  out.mp = u.col(0);
  out.info = u.col(1);
  out.theta = theta;
  out.method = theta == dec.theta_star ? dec.method : IdentificationMethod::fixed_angle;
  return out;
}

ShockSeries decompose(const EventSurprises& events, double theta) {
  Decomposition dec;
  dec.mean = events.matrix().colwise().mean().transpose();
  dec.covariance = sample_covariance(events);
  dec.chol = cholesky2(dec.covariance);
  dec.theta_star = theta;
  dec.method = IdentificationMethod::fixed_angle;
  return decompose(events, dec, theta);
}

ShockSeries poor_mans_split(const EventSurprises& events) {
  const auto n = static_cast<Eigen::Index>(events.size());
  ShockSeries out;
  out.mp = Eigen::VectorXd::Zero(n);
  out.info = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = events.events[i];
    out.dates.push_back(e.date);
    const double product = e.ir * e.eq;
    if (product < 0.0) {
      out.mp(i) = e.ir;
    } else if (product > 0.0) {
      out.info(i) = e.ir;
    }
  }
  out.method = IdentificationMethod::poor_mans;
  out.theta = std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<double> draw_admissible(std::span<const double> admissible, int n, std::uint64_t seed) {
  if (admissible.empty()) throw Error(Errc::empty_admissible_set, "cannot draw from an empty admissible set");
  if (n < 1) throw Error(Errc::invalid_argument, "draw count must be positive");
  auto rng = substream(seed, 0);
  std::vector<double> out(n);
  for (auto& theta : out) theta = admissible[uniform_index(rng, admissible.size())];
  return out;
}

std::string decomposition_report_csv(const EventSurprises& events, const ShockSeries& shocks) {
  if (events.size() != shocks.size()) throw Error(Errc::invalid_argument, "events and shocks differ in length");
  const std::string method(to_string(shocks.method));
  const std::string theta = std::isnan(shocks.theta) ? "NA" : format_double(shocks.theta);
  std::string out = "date,ir,eq,mp,info,method,theta_star\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events.events[i];
    const auto k = static_cast<Eigen::Index>(i);
    out += format(e.date) + "," + format_double(e.ir) + "," + format_double(e.eq) + "," +
           format_double(shocks.mp(k)) + "," + format_double(shocks.info(k)) + "," + method + "," + theta + "\n";
  }
  return out;
}

}  // namespace spillover
