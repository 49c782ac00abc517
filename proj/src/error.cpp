#include "spillover/error.hpp"

namespace spillover {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::file_not_found: return "file_not_found";
    case Errc::parse_error: return "parse_error";
    case Errc::missing_column: return "missing_column";
    case Errc::non_monotone_dates: return "non_monotone_dates";
    case Errc::month_gap: return "month_gap";
    case Errc::missing_value: return "missing_value";
    case Errc::non_positive_log: return "non_positive_log";
    case Errc::event_out_of_range: return "event_out_of_range";
    case Errc::http_error: return "http_error";
    case Errc::not_found: return "not_found";
    case Errc::malformed_payload: return "malformed_payload";
    case Errc::empty_result: return "empty_result";
    case Errc::too_few_events: return "too_few_events";
    case Errc::zero_variance: return "zero_variance";
    case Errc::not_positive_definite: return "not_positive_definite";
    case Errc::empty_admissible_set: return "empty_admissible_set";
    case Errc::non_contiguous_arc: return "non_contiguous_arc";
    case Errc::singular_matrix: return "singular_matrix";
    case Errc::insufficient_observations: return "insufficient_observations";
    case Errc::degenerate_scale: return "degenerate_scale";
    case Errc::empty_design: return "empty_design";
    case Errc::rank_deficient: return "rank_deficient";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::config_error: return "config_error";
    case Errc::unstable_dgp: return "unstable_dgp";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace spillover
