#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spillover/config.hpp"
#include "spillover/dgp.hpp"
#include "spillover/irf.hpp"
#include "spillover/shockid.hpp"

namespace spillover {

inline constexpr const char* kVersion = "0.1.0";

/// Windowed inputs and the identified shocks they imply.
struct PreparedRun {
  MonthlyPanel panel;      // restricted to the sample window
  EventSurprises events;   // announcements falling in the panel's months
  ShockSeries shocks;      // event-level identified shocks
  std::optional<Decomposition> decomposition;  // rotational methods only
  std::optional<DgpTruth> truth;               // synthetic runs only
};

/// Loads (or simulates) inputs, applies the window, and identifies shocks. No files written.
PreparedRun prepare(const RunConfig& config);

/// Monthly series for the configured shock variant, aligned with the panel rows.
Eigen::VectorXd variant_series(const PreparedRun& run, ShockVariant variant);

/// Engine seeds are derived from the master seed only, so every variant and engine
/// of one configuration consumes the same posterior random numbers.
std::uint64_t engine_seed(const RunConfig& config, Engine engine);

IrfBand run_engine(const RunConfig& config, Engine engine, const MonthlyPanel& panel,
                   const Eigen::VectorXd& shock, ShockVariant variant);

struct RotationBands {
  IrfBand pooled;
  IrfBand benchmark;                 // fixed at the median rotation
  std::vector<double> angles;        // drawn rotations
  int draws_per_angle = 0;
  double wider_fraction = 0.0;       // share of cells where pooled is at least as wide
};

/// Pools BVAR posterior draws across `n_rot` rotations drawn uniformly from the admissible set.
RotationBands rotation_uncertainty_bands(const RunConfig& config, const PreparedRun& run, int n_rot);

/// Same, with explicit rotations instead of random draws.
RotationBands pooled_rotation_bands(const RunConfig& config, const PreparedRun& run,
                                    const std::vector<double>& angles);

struct RunArtifacts {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
  std::vector<IrfBand> bands;
};

/// Full pipeline for the configured variant: shocks.csv, irf_<engine>_<variant>.csv, one SVG
/// per variable, and run_meta.json in config.out_dir.
RunArtifacts run_pipeline(const RunConfig& config);

/// Pure policy, information, and raw surprise variants for every configured engine, plus a
/// side-by-side table compare_<engine>.csv.
RunArtifacts compare_shock_variants(const RunConfig& config);

/// Writes irf_bvar_<variant>_pooled.csv and its fan charts.
RunArtifacts run_rotation_bands(const RunConfig& config);

/// Writes shocks.csv only.
RunArtifacts run_identify(const RunConfig& config);

/// Writes panel.csv, surprises.csv, shocks_true.csv and truth.csv from the synthetic DGP.
RunArtifacts run_simulate(const RunConfig& config);

}  // namespace spillover
