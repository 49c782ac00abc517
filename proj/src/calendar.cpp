#include "spillover/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "spillover/error.hpp"

namespace spillover {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::parse_error, "bad date '" + std::string(whole) + "'");
  }
  return value;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

}  // namespace

YearMonth YearMonth::from_ordinal(int ord) {
  int y = ord / 12;
  int m = ord % 12;
  if (m < 0) {
    m += 12;
    --y;
  }
  return {y, m + 1};
}

YearMonth parse_year_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') {
    throw Error(Errc::parse_error, "expected YYYY-MM, got '" + std::string(text) + "'");
  }
  YearMonth ym{parse_int(text.substr(0, 4), text), parse_int(text.substr(5, 2), text)};
  if (ym.month < 1 || ym.month > 12) {
    throw Error(Errc::parse_error, "month out of range in '" + std::string(text) + "'");
  }
  return ym;
}

Day parse_day(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(Errc::parse_error, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  Day d{parse_int(text.substr(0, 4), text), parse_int(text.substr(5, 2), text),
        parse_int(text.substr(8, 2), text)};
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
    throw Error(Errc::parse_error, "invalid calendar day '" + std::string(text) + "'");
  }
  return d;
}

std::string format(const YearMonth& ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", ym.year, ym.month);
  return buf;
}

std::string format(const Day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace spillover
