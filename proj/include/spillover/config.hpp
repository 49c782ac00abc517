#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spillover/bvar.hpp"
#include "spillover/calendar.hpp"
#include "spillover/localproj.hpp"
#include "spillover/types.hpp"

namespace spillover {

enum class Identification { median_rotation, poor_mans, fixed_angle, uniform_rotations };
enum class ShockVariant { pure_mp, info, raw_hfi };
enum class Engine { bvar, local_projection };

std::string_view to_string(Identification id);
std::string_view to_string(ShockVariant v);
std::string_view to_string(Engine e);

struct RunConfig {
  // inputs: files, or the built-in synthetic DGP
  std::optional<std::filesystem::path> panel_path;
  std::optional<std::filesystem::path> surprises_path;
  std::vector<ColumnSpec> columns;
  bool synthetic = false;
  int synthetic_T = 300;
  int synthetic_events_per_month = 1;
  std::optional<std::uint64_t> synthetic_seed;  // defaults to the master seed

  Identification identification = Identification::median_rotation;
  double fixed_angle = 0.0;
  int n_rot = 200;
  int grid_size = 999;
  ShockVariant variant = ShockVariant::pure_mp;

  std::optional<YearMonth> window_start;
  std::optional<YearMonth> window_end;
  bool covid_dummy = true;

  std::vector<Engine> engines{Engine::bvar};
  bvar::VarxSpec varx;
  int n_draws = 2000;
  lp::LpSpec lp;
  bool lp_auto_controls = true;  // derive controls from column roles

  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;

  /// Raw key/value pairs as read, echoed into run metadata.
  std::map<std::string, std::string> entries;

  /// Throws config_error on any inconsistency (no engine, no seed, missing inputs, bad window).
  void validate() const;
  std::uint64_t master_seed() const;
};

/// Flat key = value document with dotted keys (or [section] headers); `#` starts a comment.
/// Unknown keys, duplicate keys, and bad enum values are config_error.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Every recognised key, for documentation and error messages.
std::vector<std::string> config_keys();

}  // namespace spillover
