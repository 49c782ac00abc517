#include "spillover/remote.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen parameter names.
#include <httplib.h>

namespace spillover {

namespace {

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

}  // namespace

RemoteSeries parse_remote_csv(const std::string& payload, const std::string& series_id,
                              const std::string& missing_marker, const std::string& context) {
  RemoteSeries series;
  series.series_id = series_id;
  std::istringstream in(payload);
  std::string line;
  if (!std::getline(in, line) || trim(line).find(',') == std::string_view::npos) {
    throw Error(Errc::malformed_payload, context + ": missing `date,value` header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto row = trim(line);
    if (row.empty()) continue;
    auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::malformed_payload, context + ": line " + std::to_string(line_no) + " has no comma");
    }
    auto date_text = trim(row.substr(0, comma));
    auto value_text = trim(row.substr(comma + 1));
    Day date;
    try {
      date = date_text.size() == 7 ? Day{parse_year_month(date_text).year, parse_year_month(date_text).month, 1}
                                   : parse_day(date_text);
    } catch (const Error&) {
      throw Error(Errc::malformed_payload, context + ": bad date '" + std::string(date_text) + "' on line " +
                                               std::to_string(line_no));
    }
    if (value_text == missing_marker) {
      ++series.skipped_missing;
      continue;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc{} || ptr != value_text.data() + value_text.size() || !std::isfinite(value)) {
      throw Error(Errc::malformed_payload, context + ": bad value '" + std::string(value_text) + "' on line " +
                                               std::to_string(line_no));
    }
    if (!series.rows.empty() && !(series.rows.back().date < date)) {
      throw Error(Errc::malformed_payload, context + ": dates not increasing at line " + std::to_string(line_no));
    }
    series.rows.push_back({date, value});
  }
  if (series.rows.empty()) throw Error(Errc::empty_result, context + ": no observations");
  return series;
}

RemoteSeries fetch_remote_series(const std::string& endpoint, const std::string& series_id,
                                 const std::string& api_key, const FetchOptions& options) {
  if (api_key.empty()) throw Error(Errc::invalid_argument, "empty API key for " + endpoint);
  auto url = substitute(substitute(endpoint, "{series_id}", series_id), "{api_key}", api_key);
  auto context = substitute(endpoint, "{series_id}", series_id);  // keeps the key out of messages

  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::invalid_argument, "endpoint lacks a scheme: " + context);
  auto path_start = url.find('/', scheme_end + 3);
  std::string base = url.substr(0, path_start);
  std::string target = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(options.timeout_seconds);
  client.set_read_timeout(options.timeout_seconds);

  std::string failure;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    auto res = client.Get(target);
    if (!res) {
      failure = "request failed (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status == 404) throw Error(Errc::not_found, context + ": HTTP 404");
    if (res->status >= 500) {
      failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw Error(Errc::http_error, context + ": HTTP " + std::to_string(res->status));

    auto series = parse_remote_csv(res->body, series_id, options.missing_marker, context);
    if (options.cache_path) write_file_atomic(*options.cache_path, remote_series_to_csv(series));
    return series;
  }
  throw Error(Errc::http_error, context + ": " + failure);
}

std::string remote_series_to_csv(const RemoteSeries& series) {
  std::string out = "date," + series.series_id + "\n";
  for (const auto& r : series.rows) out += format(r.date.year_month()) + "," + format_double(r.value) + "\n";
  return out;
}

}  // namespace spillover
