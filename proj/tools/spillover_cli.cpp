#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spillover/config.hpp"
#include "spillover/error.hpp"
#include "spillover/pipeline.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

spillover::RunConfig resolve(const GlobalFlags& flags) {
  auto config = spillover::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.out) config.out_dir = *flags.out;
  if (flags.threads) config.threads = *flags.threads;
  config.validate();
  return config;
}

void report(const spillover::RunArtifacts& artifacts) {
  for (const auto& f : artifacts.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monetary policy spillover analysis: shock identification, BVAR and local projections"};
  app.set_version_flag("--version", std::string(spillover::kVersion));
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Master seed (overrides run.seed)");
  app.add_option("--out", flags.out, "Output directory (overrides output.dir)");
  app.add_option("--threads", flags.threads, "Worker threads; 0 uses all cores")->check(CLI::NonNegativeNumber);

  auto* identify = app.add_subcommand("identify", "Identify event-level shocks and write shocks.csv");
  auto* estimate = app.add_subcommand("estimate", "Estimate IRFs for the configured variant and engines");
  auto* compare = app.add_subcommand("compare-variants", "Estimate pure policy, information and raw surprise IRFs");
  auto* rotation = app.add_subcommand("rotation-bands", "Pool posterior draws over admissible rotations");
  int n_rot = -1;
  rotation->add_option("--n-rot", n_rot, "Number of rotation draws (overrides identification.n_rot)")
      ->check(CLI::PositiveNumber);
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic panel, surprises and truth record");

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = resolve(flags);
    if (n_rot > 0) config.n_rot = n_rot;
    if (*identify) report(spillover::run_identify(config));
    else if (*estimate) report(spillover::run_pipeline(config));
    else if (*compare) report(spillover::compare_shock_variants(config));
    else if (*rotation) report(spillover::run_rotation_bands(config));
    else if (*simulate) report(spillover::run_simulate(config));
  } catch (const spillover::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
