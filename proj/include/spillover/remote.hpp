#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spillover/calendar.hpp"

namespace spillover {

struct RemoteRow {
  Day date;
  double value = 0.0;
};

struct RemoteSeries {
  std::string series_id;
  std::vector<RemoteRow> rows;
  int skipped_missing = 0;  // rows carrying the missing-value marker
};

struct FetchOptions {
  std::string missing_marker = ".";
  int retries = 2;  // extra attempts on connection failures and 5xx
  int timeout_seconds = 30;
  /// When set, the parsed series is written here as `date,<series_id>` on success only.
  std::optional<std::filesystem::path> cache_path;
};

/// Parses a `date,value` CSV payload (header row first). Dates may be YYYY-MM-DD or YYYY-MM;
/// monthly dates map to the first of the month. `context` prefixes error messages.
RemoteSeries parse_remote_csv(const std::string& payload, const std::string& series_id,
                              const std::string& missing_marker, const std::string& context);

/// GETs a FRED-compatible CSV endpoint. `endpoint` is a URL template in which
/// `{series_id}` and `{api_key}` are substituted, e.g.
/// `http://host:8080/series/observations.csv?series_id={series_id}&api_key={api_key}`.
RemoteSeries fetch_remote_series(const std::string& endpoint, const std::string& series_id,
                                 const std::string& api_key, const FetchOptions& options = {});

/// The series in panel CSV layout (`date` as YYYY-MM), ready for load_panel.
std::string remote_series_to_csv(const RemoteSeries& series);

}  // namespace spillover
