#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/calendar.hpp"

namespace spillover {

enum class Transform { level, log_times_100, percent };
enum class Role { domestic, foreign, policy_rate, exchange_rate, other };

struct ColumnSpec {
  std::string name;
  Transform transform = Transform::level;
  Role role = Role::other;
};

/// Aligned monthly panel. Values are stored post-transformation, one column per series.
struct MonthlyPanel {
  YearMonth start;
  std::vector<ColumnSpec> columns;
  Eigen::MatrixXd values;  // T x n

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  YearMonth month_at(int t) const { return start.plus(t); }
  YearMonth end() const { return start.plus(rows() - 1); }

  /// Index of a named column, or -1.
  int find(const std::string& name) const;
  /// Index of a named column; throws missing_column.
  int index_of(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Rows falling in [from, to]; both ends clipped to the panel.
  MonthlyPanel window(const YearMonth& from, const YearMonth& to) const;
};

struct SurpriseEvent {
  Day date;
  double ir = 0.0;  // interest-rate surprise, basis points
  double eq = 0.0;  // equity surprise, percent
};

struct EventSurprises {
  std::vector<SurpriseEvent> events;

  std::size_t size() const { return events.size(); }
  /// Throws on non-increasing dates or non-finite values.
  void validate() const;
  /// Events whose month lies in [from, to].
  EventSurprises window(const YearMonth& from, const YearMonth& to) const;
  Eigen::MatrixX2d matrix() const;  // columns (ir, eq)
};

enum class IdentificationMethod { median_rotation, uniform_draw, fixed_angle, poor_mans };

std::string_view to_string(IdentificationMethod m);

/// Structural shocks at event frequency.
struct ShockSeries {
  std::vector<Day> dates;
  Eigen::VectorXd mp;
  Eigen::VectorXd info;
  IdentificationMethod method = IdentificationMethod::median_rotation;
  double theta = 0.0;  // NaN under poor_mans

  std::size_t size() const { return dates.size(); }
};

/// Shocks summed to calendar months.
struct MonthlyShocks {
  YearMonth start;
  Eigen::VectorXd mp;
  Eigen::VectorXd info;
};

}  // namespace spillover
