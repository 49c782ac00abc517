#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/types.hpp"

namespace spillover {

Transform parse_transform(std::string_view text);
Role parse_role(std::string_view text);
std::string_view to_string(Transform t);
std::string_view to_string(Role r);

/// Parses "name[:transform[:role]]" column declarations.
ColumnSpec parse_column_spec(std::string_view text);

/// Reads a panel CSV: header row, first column a YYYY-MM (or YYYY-MM-DD) date.
/// Only the declared columns are read; extra columns are ignored. Leading and trailing
/// rows with missing entries are trimmed, interior ones are an error.
MonthlyPanel load_panel(const std::filesystem::path& path, const std::vector<ColumnSpec>& schema);
MonthlyPanel read_panel(std::istream& in, const std::vector<ColumnSpec>& schema,
                        const std::string& origin = "<stream>");

/// Canonical CSV: `date` column as YYYY-MM, shortest round-trip decimal values.
std::string panel_to_csv(const MonthlyPanel& panel);
void write_panel(const MonthlyPanel& panel, const std::filesystem::path& path);

/// Surprise CSV with columns date (YYYY-MM-DD), ir, eq.
EventSurprises load_surprises(const std::filesystem::path& path);
EventSurprises read_surprises(std::istream& in, const std::string& origin = "<stream>");
std::string surprises_to_csv(const EventSurprises& events);

struct Deterministics {
  Eigen::VectorXd trend;  // 1..T
  Eigen::VectorXd covid;  // 1 on 2020-03..2021-06
};

inline constexpr YearMonth kCovidFirst{2020, 3};
inline constexpr YearMonth kCovidLast{2021, 6};

Deterministics build_deterministics(const YearMonth& start, int T);

/// Within-month sum of event values over the T months from `start`; empty months are zero.
Eigen::VectorXd aggregate_to_monthly(std::span<const Day> dates, const Eigen::VectorXd& values,
                                     const YearMonth& start, int T);
MonthlyShocks aggregate_events_to_monthly(const ShockSeries& shocks, const YearMonth& start, int T);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace spillover
