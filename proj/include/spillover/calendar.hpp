#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace spillover {

/// Calendar month. Ordering and arithmetic go through a month ordinal.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  int ordinal() const { return year * 12 + (month - 1); }
  static YearMonth from_ordinal(int ord);

  YearMonth plus(int months) const { return from_ordinal(ordinal() + months); }
  int months_until(const YearMonth& other) const { return other.ordinal() - ordinal(); }

  friend bool operator==(const YearMonth&, const YearMonth&) = default;
  friend auto operator<=>(const YearMonth& a, const YearMonth& b) { return a.ordinal() <=> b.ordinal(); }
};

/// Calendar day, used for announcement dates.
struct Day {
  int year = 1970;
  int month = 1;
  int day = 1;

  YearMonth year_month() const { return {year, month}; }

  friend bool operator==(const Day&, const Day&) = default;
  friend auto operator<=>(const Day&, const Day&) = default;
};

// Strict parsers; throw Error(parse_error) on malformed input.
YearMonth parse_year_month(std::string_view text);
Day parse_day(std::string_view text);

std::string format(const YearMonth& ym);  // YYYY-MM
std::string format(const Day& d);         // YYYY-MM-DD

}  // namespace spillover
