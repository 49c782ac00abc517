#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spillover {

enum class Errc {
  // data ingestion
  file_not_found,
  parse_error,
  missing_column,
  non_monotone_dates,
  month_gap,
  missing_value,
  non_positive_log,
  event_out_of_range,
  // remote fetch
  http_error,
  not_found,
  malformed_payload,
  empty_result,
  // identification
  too_few_events,
  zero_variance,
  not_positive_definite,
  empty_admissible_set,
  non_contiguous_arc,
  singular_matrix,
  // estimation
  insufficient_observations,
  degenerate_scale,
  empty_design,
  rank_deficient,
  invalid_argument,
  // orchestration
  config_error,
  unstable_dgp,
  io_error,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries a stable code alongside its message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace spillover
