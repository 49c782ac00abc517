#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/types.hpp"

namespace spillover {

/// Equally spaced angles on [-pi, pi).
class RotationGrid {
 public:
  explicit RotationGrid(int n_angles = 999);

  int size() const { return n_; }
  double spacing() const { return spacing_; }
  double angle(int i) const;
  std::vector<double> angles() const;

 private:
  int n_;
  double spacing_;
};

/// R(theta) = [[cos, -sin], [sin, cos]].
Eigen::Matrix2d rotation(double theta);

/// Impact matrix C * R(theta): column 0 is the policy shock, column 1 the information shock.
Eigen::Matrix2d impact_matrix(const Eigen::Matrix2d& chol, double theta);

/// Policy raises rates and lowers equities; information raises both. All strict.
bool satisfies_sign_restrictions(const Eigen::Matrix2d& impact);

/// Demeaned covariance with divisor n-1.
Eigen::Matrix2d sample_covariance(const EventSurprises& events);

/// Lower-triangular factor with positive diagonal. Throws not_positive_definite.
Eigen::Matrix2d cholesky2(const Eigen::Matrix2d& S);

/// Grid angles whose rotation passes all four sign restrictions, increasing. May be empty.
std::vector<double> admissible_angles(const Eigen::Matrix2d& chol, const RotationGrid& grid);

/// Circular median of a contiguous arc of grid angles. `spacing` is the grid step used to
/// detect breaks in the arc. Even counts take the lower middle.
double median_rotation(std::span<const double> admissible, double spacing = RotationGrid().spacing());

/// Summary of a rotational identification.
struct Decomposition {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d chol = Eigen::Matrix2d::Identity();
  std::vector<double> admissible;
  double theta_star = 0.0;
  IdentificationMethod method = IdentificationMethod::median_rotation;
};

/// Moments, factor, and admissible arc of the events, with theta_star at the median rotation.
Decomposition identify_median(const EventSurprises& events, const RotationGrid& grid = RotationGrid());

/// u_t = R(theta)' C^-1 (m_t - mean) for each row of `surprises`.
Eigen::MatrixX2d structural_shocks(const Eigen::Matrix2d& chol, const Eigen::Vector2d& mean, double theta,
                                   const Eigen::MatrixX2d& surprises);

/// Splits events at angle theta; theta must satisfy the sign restrictions.
ShockSeries decompose(const EventSurprises& events, double theta);
ShockSeries decompose(const EventSurprises& events, const Decomposition& dec, double theta);

/// Poor man's sign restriction: negative rate/equity co-movement is policy, positive is
/// information, a zero product is neither.
ShockSeries poor_mans_split(const EventSurprises& events);

/// Uniform draws with replacement from the admissible set, reproducible given seed.
std::vector<double> draw_admissible(std::span<const double> admissible, int n, std::uint64_t seed);

/// CSV with columns date,ir,eq,mp,info,method,theta_star.
std::string decomposition_report_csv(const EventSurprises& events, const ShockSeries& shocks);

}  // namespace spillover
