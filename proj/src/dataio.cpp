#include "spillover/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "spillover/error.hpp"

namespace spillover {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool is_missing_marker(std::string_view cell) { return cell.empty() || cell == "NA" || cell == "." || cell == "NaN"; }

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

YearMonth parse_row_month(std::string_view cell) {
  if (cell.size() == 10) return parse_day(cell).year_month();
  return parse_year_month(cell);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, path.string());
  return in;
}

}  // namespace

int MonthlyPanel::find(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return static_cast<int>(j);
  }
  return -1;
}

int MonthlyPanel::index_of(const std::string& name) const {
  int j = find(name);
  if (j < 0) throw Error(Errc::missing_column, "panel has no column '" + name + "'");
  return j;
}

std::vector<std::string> MonthlyPanel::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

MonthlyPanel MonthlyPanel::window(const YearMonth& from, const YearMonth& to) const {
  int first = std::max(0, start.months_until(from));
  int last = std::min(rows() - 1, start.months_until(to));
  if (last < first) {
    throw Error(Errc::insufficient_observations,
                "window " + format(from) + ".." + format(to) + " does not overlap the panel");
  }
  MonthlyPanel out;
  out.start = start.plus(first);
  out.columns = columns;
  out.values = values.middleRows(first, last - first + 1);
  return out;
}

void EventSurprises::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!std::isfinite(e.ir) || !std::isfinite(e.eq)) {
      throw Error(Errc::parse_error, "non-finite surprise on " + format(e.date));
    }
    if (i > 0 && !(events[i - 1].date < e.date)) {
      throw Error(Errc::non_monotone_dates, "event dates not strictly increasing at " + format(e.date));
    }
  }
}

EventSurprises EventSurprises::window(const YearMonth& from, const YearMonth& to) const {
  EventSurprises out;
  for (const auto& e : events) {
    auto ym = e.date.year_month();
    if (from <= ym && ym <= to) out.events.push_back(e);
  }
  return out;
}

Eigen::MatrixX2d EventSurprises::matrix() const {
  Eigen::MatrixX2d m(events.size(), 2);
  for (std::size_t i = 0; i < events.size(); ++i) {
    m(i, 0) = events[i].ir;
    m(i, 1) = events[i].eq;
  }
  return m;
}

std::string_view to_string(IdentificationMethod m) {
  switch (m) {
    case IdentificationMethod::median_rotation: return "median_rotation";
    case IdentificationMethod::uniform_draw: return "uniform_draw";
    case IdentificationMethod::fixed_angle: return "fixed_angle";
    case IdentificationMethod::poor_mans: return "poor_mans";
  }
  return "unknown";
}

Transform parse_transform(std::string_view text) {
  if (text == "level") return Transform::level;
  if (text == "log_times_100" || text == "log") return Transform::log_times_100;
  if (text == "percent") return Transform::percent;
  throw Error(Errc::parse_error, "unknown transform '" + std::string(text) + "'");
}

Role parse_role(std::string_view text) {
  if (text == "domestic") return Role::domestic;
  if (text == "foreign") return Role::foreign;
  if (text == "policy_rate") return Role::policy_rate;
  if (text == "exchange_rate") return Role::exchange_rate;
  if (text == "other") return Role::other;
  throw Error(Errc::parse_error, "unknown role '" + std::string(text) + "'");
}

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::level: return "level";
    case Transform::log_times_100: return "log_times_100";
    case Transform::percent: return "percent";
  }
  return "level";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::domestic: return "domestic";
    case Role::foreign: return "foreign";
    case Role::policy_rate: return "policy_rate";
    case Role::exchange_rate: return "exchange_rate";
    case Role::other: return "other";
  }
  return "other";
}

ColumnSpec parse_column_spec(std::string_view text) {
  text = trim(text);
  ColumnSpec spec;
  auto c1 = text.find(':');
  spec.name = std::string(trim(text.substr(0, c1)));
  if (spec.name.empty()) throw Error(Errc::parse_error, "empty column name in '" + std::string(text) + "'");
  if (c1 == std::string_view::npos) return spec;
  auto rest = text.substr(c1 + 1);
  auto c2 = rest.find(':');
  spec.transform = parse_transform(trim(rest.substr(0, c2)));
  if (c2 != std::string_view::npos) spec.role = parse_role(trim(rest.substr(c2 + 1)));
  return spec;
}

MonthlyPanel read_panel(std::istream& in, const std::vector<ColumnSpec>& schema, const std::string& origin) {
  if (schema.empty()) throw Error(Errc::invalid_argument, "empty column schema for " + origin);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, origin + ": empty file");
  auto header = split_csv(line);
  std::vector<std::size_t> source(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    bool found = false;
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c] == schema[j].name) {
        source[j] = c;
        found = true;
        break;
      }
    }
    if (!found) throw Error(Errc::missing_column, origin + ": column '" + schema[j].name + "' not in header");
  }

  std::vector<YearMonth> months;
  std::vector<std::vector<std::optional<double>>> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    auto month = parse_row_month(fields[0]);
    if (!months.empty()) {
      int step = months.back().months_until(month);
      if (step <= 0) {
        throw Error(Errc::non_monotone_dates, origin + ":" + std::to_string(line_no) + ": " + format(month) +
                                                  " does not follow " + format(months.back()));
      }
      if (step > 1) {
        throw Error(Errc::month_gap,
                    origin + ":" + std::to_string(line_no) + ": gap between " + format(months.back()) + " and " +
                        format(month));
      }
    }
    std::vector<std::optional<double>> row(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      auto cell = source[j] < fields.size() ? fields[source[j]] : std::string_view{};
      if (is_missing_marker(cell)) continue;
      row[j] = parse_number(cell);
      if (!row[j]) {
        throw Error(Errc::parse_error, origin + ":" + std::to_string(line_no) + ": bad number '" +
                                           std::string(cell) + "' in column " + schema[j].name);
      }
    }
    months.push_back(month);
    cells.push_back(std::move(row));
  }

  auto complete = [&](std::size_t i) {
    for (const auto& c : cells[i]) {
      if (!c) return false;
    }
    return true;
  };
  std::size_t first = 0;
  while (first < cells.size() && !complete(first)) ++first;
  std::size_t last = cells.size();
  while (last > first && !complete(last - 1)) --last;
  if (first == last) throw Error(Errc::insufficient_observations, origin + ": no complete rows");
  for (std::size_t i = first; i < last; ++i) {
    if (!complete(i)) throw Error(Errc::missing_value, origin + ": missing interior value at " + format(months[i]));
  }

  MonthlyPanel panel;
  panel.start = months[first];
  panel.columns = schema;
  panel.values.resize(static_cast<Eigen::Index>(last - first), static_cast<Eigen::Index>(schema.size()));
  for (std::size_t i = first; i < last; ++i) {
    for (std::size_t j = 0; j < schema.size(); ++j) {
      double raw = *cells[i][j];
      double v = raw;
      if (schema[j].transform == Transform::log_times_100) {
        if (!(raw > 0.0)) {
          throw Error(Errc::non_positive_log, origin + ": non-positive value " + format_double(raw) + " in column " +
                                                  schema[j].name + " at " + format(months[i]));
        }
        v = 100.0 * std::log(raw);
      }
      panel.values(static_cast<Eigen::Index>(i - first), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return panel;
}

MonthlyPanel load_panel(const std::filesystem::path& path, const std::vector<ColumnSpec>& schema) {
  auto in = open_input(path);
  return read_panel(in, schema, path.string());
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string panel_to_csv(const MonthlyPanel& panel) {
  std::string out = "date";
  for (const auto& c : panel.columns) out += "," + c.name;
  out += "\n";
  for (int t = 0; t < panel.rows(); ++t) {
    out += format(panel.month_at(t));
    for (int j = 0; j < panel.cols(); ++j) out += "," + format_double(panel.values(t, j));
    out += "\n";
  }
  return out;
}

void write_panel(const MonthlyPanel& panel, const std::filesystem::path& path) {
  write_file_atomic(path, panel_to_csv(panel));
}

EventSurprises read_surprises(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, origin + ": empty file");
  auto header = split_csv(line);
  std::size_t ir_col = 0;
  std::size_t eq_col = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "ir") ir_col = c;
    if (header[c] == "eq") eq_col = c;
  }
  if (ir_col == 0) throw Error(Errc::missing_column, origin + ": column 'ir' not in header");
  if (eq_col == 0) throw Error(Errc::missing_column, origin + ": column 'eq' not in header");

  EventSurprises out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    auto where = origin + ":" + std::to_string(line_no);
    if (fields.size() <= std::max(ir_col, eq_col)) throw Error(Errc::parse_error, where + ": too few fields");
    auto ir = parse_number(fields[ir_col]);
    auto eq = parse_number(fields[eq_col]);
    if (!ir || !eq) throw Error(Errc::missing_value, where + ": missing or bad surprise value");
    out.events.push_back({parse_day(fields[0]), *ir, *eq});
  }
  out.validate();
  return out;
}

EventSurprises load_surprises(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_surprises(in, path.string());
}

std::string surprises_to_csv(const EventSurprises& events) {
  std::string out = "date,ir,eq\n";
  for (const auto& e : events.events) {
    out += format(e.date) + "," + format_double(e.ir) + "," + format_double(e.eq) + "\n";
  }
  return out;
}

Deterministics build_deterministics(const YearMonth& start, int T) {
  if (T < 1) throw Error(Errc::invalid_argument, "deterministics need T >= 1");
  Deterministics d;
  d.trend = Eigen::VectorXd::LinSpaced(T, 1.0, static_cast<double>(T));
  d.covid = Eigen::VectorXd::Zero(T);
  for (int t = 0; t < T; ++t) {
    auto ym = start.plus(t);
    if (kCovidFirst <= ym && ym <= kCovidLast) d.covid(t) = 1.0;
  }
  return d;
}

Eigen::VectorXd aggregate_to_monthly(std::span<const Day> dates, const Eigen::VectorXd& values,
                                     const YearMonth& start, int T) {
  if (static_cast<Eigen::Index>(dates.size()) != values.size()) {
    throw Error(Errc::invalid_argument, "dates and values differ in length");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(T);
  for (std::size_t i = 0; i < dates.size(); ++i) {
    int t = start.months_until(dates[i].year_month());
    if (t < 0 || t >= T) {
      throw Error(Errc::event_out_of_range, "event " + format(dates[i]) + " outside " + format(start) + ".." +
                                                format(start.plus(T - 1)));
    }
    out(t) += values(static_cast<Eigen::Index>(i));
  }
  return out;
}

MonthlyShocks aggregate_events_to_monthly(const ShockSeries& shocks, const YearMonth& start, int T) {
  return {start, aggregate_to_monthly(shocks.dates, shocks.mp, start, T),
          aggregate_to_monthly(shocks.dates, shocks.info, start, T)};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(Errc::io_error, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io_error, "cannot rename onto " + path.string());
  }
}

}  // namespace spillover
