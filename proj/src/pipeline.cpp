#include "spillover/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"

#include "spillover/bvar.hpp"
#include "spillover/dataio.hpp"
#include "spillover/error.hpp"
#include "spillover/localproj.hpp"
#include "spillover/random.hpp"

namespace spillover {

namespace {

constexpr std::uint64_t kBvarStream = 0x62766172;      // "bvar"
constexpr std::uint64_t kLpStream = 0x6c70;            // "lp"
constexpr std::uint64_t kRotationStream = 0x726f74;    // "rot"

bool rotational(Identification id) { return id != Identification::poor_mans; }

Decomposition rotational_moments(const EventSurprises& events, const RotationGrid& grid) {
  Decomposition dec;
  dec.mean = events.matrix().colwise().mean().transpose();
  dec.covariance = sample_covariance(events);
  dec.chol = cholesky2(dec.covariance);
  dec.admissible = admissible_angles(dec.chol, grid);
  return dec;
}

bvar::VarxSpec varx_spec(const RunConfig& config) {
  auto spec = config.varx;
  spec.covid = config.covid_dummy;
  spec.n_exo = 1;
  return spec;
}

lp::LpSpec lp_spec(const RunConfig& config, const MonthlyPanel& panel) {
  auto spec = config.lp;
  spec.covid = config.covid_dummy;
  if (config.lp_auto_controls) {
    spec.domestic_controls.clear();
    spec.foreign_controls.clear();
    for (const auto& c : panel.columns) {
      (c.role == Role::foreign ? spec.foreign_controls : spec.domestic_controls).push_back(c.name);
    }
  }
  return spec;
}

Eigen::MatrixXd as_column(const Eigen::VectorXd& v) { return Eigen::MatrixXd(v); }

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    files_.push_back(dir_ / name);
  }

  void write_band(const IrfBand& band) {
    write("irf_" + band.engine + "_" + band.variant + ".csv", irf_to_csv(band));
    for (int i = 0; i < static_cast<int>(band.variables.size()); ++i) {
      write(band.variables[i] + "_" + band.engine + "_" + band.variant + ".svg", fan_chart_svg(band, i));
    }
  }

  RunArtifacts finish(const RunConfig& config, const std::string& command, const PreparedRun* run,
                      std::vector<IrfBand> bands, nlohmann::json extra,
                      std::chrono::steady_clock::time_point started) {
    nlohmann::json meta;
    meta["command"] = command;
    meta["version"] = kVersion;
    meta["seed"] = config.master_seed();
    meta["threads"] = config.threads;
    meta["config"] = config.entries;
    meta["resolved"] = {
        {"identification", to_string(config.identification)},
        {"variant", to_string(config.variant)},
        {"covid_dummy", config.covid_dummy},
        {"bvar", {{"lags", config.varx.p}, {"horizon", config.varx.horizon}, {"draws", config.n_draws},
                  {"lambda1", config.varx.hyper.lambda1}, {"lambda3", config.varx.hyper.lambda3},
                  {"lambda4", config.varx.hyper.lambda4}, {"own_lag_mean", config.varx.hyper.own_lag_mean},
                  {"trend", config.varx.trend}, {"exo_lags", config.varx.exo_lags},
                  {"seed", engine_seed(config, Engine::bvar)}}},
        {"local_projection", {{"horizon", config.lp.horizon}, {"shock_lags", config.lp.shock_lags},
                              {"dep_lags", config.lp.dep_lags}, {"domestic_lags", config.lp.domestic_lags},
                              {"foreign_lags", config.lp.foreign_lags},
                              {"inference", config.lp.inference == lp::Inference::white ? "white" : "newey_west"},
                              {"bandwidth_offset", config.lp.bandwidth_offset}, {"z", config.lp.z},
                              {"common_sample", config.lp.common_sample}}},
    };
    if (run) {
      const auto det = build_deterministics(run->panel.start, run->panel.rows());
      meta["sample"] = {{"start", format(run->panel.start)},
                        {"end", format(run->panel.end())},
                        {"months", run->panel.rows()},
                        {"events", run->events.size()},
                        {"covid_months", static_cast<int>(det.covid.sum())},
                        {"variables", run->panel.names()}};
      nlohmann::json ident = {{"method", to_string(run->shocks.method)}};
      if (run->decomposition) {
        const auto& d = *run->decomposition;
        ident["theta_star"] = d.theta_star;
        ident["admissible_count"] = d.admissible.size();
        if (!d.admissible.empty()) {
          ident["admissible_min"] = d.admissible.front();
          ident["admissible_max"] = d.admissible.back();
        }
        ident["covariance"] = {d.covariance(0, 0), d.covariance(0, 1), d.covariance(1, 1)};
      }
      meta["identification"] = ident;
      if (run->truth) meta["synthetic_truth_theta"] = run->truth->theta;
    }
    for (auto& [k, v] : extra.items()) meta[k] = v;
    nlohmann::json names = nlohmann::json::array();
    for (const auto& f : files_) names.push_back(f.filename().string());
    meta["artifacts"] = names;
    meta["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file_atomic(dir_ / "run_meta.json", meta.dump(2) + "\n");
    files_.push_back(dir_ / "run_meta.json");
    return {dir_, files_, std::move(bands)};
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

}  // namespace

PreparedRun prepare(const RunConfig& config) {
  config.validate();
  PreparedRun run;
  MonthlyPanel panel;
  EventSurprises events;
  if (config.synthetic) {
    auto params = default_dgp(config.synthetic_T, config.synthetic_seed.value_or(config.master_seed()));
    params.events_per_month = config.synthetic_events_per_month;
    auto sim = simulate_dgp(params, std::max(config.varx.horizon, config.lp.horizon));
    panel = std::move(sim.panel);
    events = std::move(sim.surprises);
    run.truth = sim.truth;
  } else {
    panel = load_panel(*config.panel_path, config.columns);
    events = load_surprises(*config.surprises_path);
  }
  run.panel = panel.window(config.window_start.value_or(panel.start), config.window_end.value_or(panel.end()));
  run.events = events.window(run.panel.start, run.panel.end());

  const RotationGrid grid(config.grid_size);
  switch (config.identification) {
    case Identification::median_rotation:
    case Identification::uniform_rotations: {
      auto dec = rotational_moments(run.events, grid);
      dec.theta_star = median_rotation(dec.admissible, grid.spacing());
      dec.method = IdentificationMethod::median_rotation;
      run.shocks = decompose(run.events, dec, dec.theta_star);
      run.decomposition = std::move(dec);
      break;
    }
    case Identification::fixed_angle: {
      auto dec = rotational_moments(run.events, grid);
      dec.theta_star = config.fixed_angle;
      dec.method = IdentificationMethod::fixed_angle;
      run.shocks = decompose(run.events, dec, dec.theta_star);
      run.decomposition = std::move(dec);
      break;
    }
    case Identification::poor_mans:
      run.shocks = poor_mans_split(run.events);
      break;
  }
  return run;
}

Eigen::VectorXd variant_series(const PreparedRun& run, ShockVariant variant) {
  const int T = run.panel.rows();
  switch (variant) {
    case ShockVariant::pure_mp: return aggregate_to_monthly(run.shocks.dates, run.shocks.mp, run.panel.start, T);
    case ShockVariant::info: return aggregate_to_monthly(run.shocks.dates, run.shocks.info, run.panel.start, T);
    case ShockVariant::raw_hfi: {
      std::vector<Day> dates;
      Eigen::VectorXd ir(static_cast<Eigen::Index>(run.events.size()));
      for (std::size_t i = 0; i < run.events.size(); ++i) {
        dates.push_back(run.events.events[i].date);
        ir(static_cast<Eigen::Index>(i)) = run.events.events[i].ir;
      }
      return aggregate_to_monthly(dates, ir, run.panel.start, T);
    }
  }
  throw Error(Errc::invalid_argument, "unknown shock variant");
}

std::uint64_t engine_seed(const RunConfig& config, Engine engine) {
  return splitmix64(config.master_seed() ^ (engine == Engine::bvar ? kBvarStream : kLpStream));
}

IrfBand run_engine(const RunConfig& config, Engine engine, const MonthlyPanel& panel, const Eigen::VectorXd& shock,
                   ShockVariant variant) {
  IrfBand band;
  if (engine == Engine::bvar) {
    bvar::IrfOptions opts;
    opts.n_draws = config.n_draws;
    opts.seed = engine_seed(config, Engine::bvar);
    opts.threads = config.threads;
    band = bvar::estimate_irf(panel, as_column(shock), varx_spec(config), opts);
  } else {
    band = lp::lp_band(panel, shock, lp_spec(config, panel), config.threads);
  }
  band.variant = std::string(to_string(variant));
  return band;
}

RotationBands pooled_rotation_bands(const RunConfig& config, const PreparedRun& run,
                                    const std::vector<double>& angles) {
  if (!run.decomposition) throw Error(Errc::config_error, "rotation bands need rotational identification");
  if (config.variant == ShockVariant::raw_hfi) {
    throw Error(Errc::config_error, "rotation bands apply to pure_mp or info, not raw_hfi");
  }
  if (angles.empty()) throw Error(Errc::invalid_argument, "no rotations to pool");
  const auto& dec = *run.decomposition;
  if (dec.admissible.empty()) throw Error(Errc::empty_admissible_set, "no admissible rotation to draw from");
  const auto spec = varx_spec(config);
  const std::uint64_t seed = engine_seed(config, Engine::bvar);

  auto shock_at = [&](double theta) {
    PreparedRun rotated;
    rotated.panel = run.panel;
    rotated.events = run.events;
    rotated.shocks = decompose(run.events, dec, theta);
    return variant_series(rotated, config.variant);
  };
  const std::string variant(to_string(config.variant));

  RotationBands out;
  out.angles = angles;
  const auto bench_fit = bvar::fit(run.panel, as_column(shock_at(dec.theta_star)), spec);
  const auto bench_paths = bvar::irf_draws(bench_fit, {config.n_draws, seed, config.threads, 0});
  out.benchmark = band_from_draws(bench_paths, run.panel.names());
  out.benchmark.engine = "bvar";
  out.benchmark.variant = variant;
  out.benchmark.shock_scale = bench_fit.shock_scales(0);

  const int n_rot = static_cast<int>(angles.size());
  out.draws_per_angle = std::max(50, config.n_draws / n_rot);
  if (dec.admissible.size() == 1) {
    out.pooled = out.benchmark;
  } else {
    std::vector<Eigen::MatrixXd> pooled;
    pooled.reserve(static_cast<std::size_t>(n_rot) * out.draws_per_angle);
    for (int r = 0; r < n_rot; ++r) {
      const auto f = bvar::fit(run.panel, as_column(shock_at(angles[r])), spec);
      bvar::IrfOptions opts{out.draws_per_angle, seed, config.threads, 0};
      opts.stream_offset = static_cast<std::uint64_t>(r) * out.draws_per_angle;
      auto paths = bvar::irf_draws(f, opts);
      std::move(paths.begin(), paths.end(), std::back_inserter(pooled));
    }
    out.pooled = band_from_draws(pooled, run.panel.names());
    out.pooled.engine = "bvar";
    out.pooled.variant = variant;
    out.pooled.shock_scale = out.benchmark.shock_scale;
  }
  out.pooled.variant = variant + "_pooled";

  const Eigen::ArrayXXd pooled_width = (out.pooled.hi - out.pooled.lo).array();
  const Eigen::ArrayXXd bench_width = (out.benchmark.hi - out.benchmark.lo).array();
  out.wider_fraction = (pooled_width >= bench_width).cast<double>().mean();
  return out;
}

RotationBands rotation_uncertainty_bands(const RunConfig& config, const PreparedRun& run, int n_rot) {
  if (!run.decomposition) throw Error(Errc::config_error, "rotation bands need rotational identification");
  const auto angles = draw_admissible(run.decomposition->admissible, n_rot,
                                      splitmix64(config.master_seed() ^ kRotationStream));
  return pooled_rotation_bands(config, run, angles);
}

RunArtifacts run_pipeline(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const auto run = prepare(config);
  ArtifactWriter out(config.out_dir);
  out.write("shocks.csv", decomposition_report_csv(run.events, run.shocks));
  const auto shock = variant_series(run, config.variant);
  std::vector<IrfBand> bands;
  nlohmann::json extra;
  for (auto engine : config.engines) {
    IrfBand band;
    if (engine == Engine::bvar && config.identification == Identification::uniform_rotations) {
      const auto rb = rotation_uncertainty_bands(config, run, config.n_rot);
      band = rb.pooled;
      band.variant = std::string(to_string(config.variant));
      extra["rotation_pooling"] = {{"n_rot", config.n_rot}, {"draws_per_angle", rb.draws_per_angle},
                                   {"wider_fraction", rb.wider_fraction}};
    } else {
      band = run_engine(config, engine, run.panel, shock, config.variant);
    }
    out.write_band(band);
    bands.push_back(std::move(band));
  }
  return out.finish(config, "estimate", &run, std::move(bands), extra, started);
}

RunArtifacts compare_shock_variants(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (!rotational(config.identification)) {
    throw Error(Errc::config_error, "compare-variants needs rotational identification");
  }
  const auto run = prepare(config);
  ArtifactWriter out(config.out_dir);
  out.write("shocks.csv", decomposition_report_csv(run.events, run.shocks));
  std::vector<IrfBand> bands;
  constexpr ShockVariant kVariants[] = {ShockVariant::pure_mp, ShockVariant::info, ShockVariant::raw_hfi};
  for (auto engine : config.engines) {
    std::vector<IrfBand> trio;
    for (auto v : kVariants) {
      trio.push_back(run_engine(config, engine, run.panel, variant_series(run, v), v));
      out.write_band(trio.back());
    }
    std::string table = "variable,horizon";
    for (const auto& b : trio) table += "," + b.variant + "_lo," + b.variant + "_median," + b.variant + "_hi";
    table += "\n";
    for (std::size_t i = 0; i < trio[0].variables.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      for (int h = 0; h <= trio[0].horizon; ++h) {
        table += trio[0].variables[i] + "," + std::to_string(h);
        for (const auto& b : trio) {
          table += "," + format_double(b.lo(r, h)) + "," + format_double(b.point(r, h)) + "," +
                   format_double(b.hi(r, h));
        }
        table += "\n";
      }
    }
    out.write("compare_" + std::string(to_string(engine)) + ".csv", table);
    std::move(trio.begin(), trio.end(), std::back_inserter(bands));
  }
  return out.finish(config, "compare-variants", &run, std::move(bands), {}, started);
}

RunArtifacts run_rotation_bands(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const auto run = prepare(config);
  const auto rb = rotation_uncertainty_bands(config, run, config.n_rot);
  ArtifactWriter out(config.out_dir);
  out.write("shocks.csv", decomposition_report_csv(run.events, run.shocks));
  out.write_band(rb.benchmark);
  out.write_band(rb.pooled);
  nlohmann::json extra;
  extra["rotation_pooling"] = {{"n_rot", static_cast<int>(rb.angles.size())},
                               {"draws_per_angle", rb.draws_per_angle},
                               {"wider_fraction", rb.wider_fraction},
                               {"angles", rb.angles}};
  return out.finish(config, "rotation-bands", &run, {rb.benchmark, rb.pooled}, extra, started);
}

RunArtifacts run_identify(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const auto run = prepare(config);
  ArtifactWriter out(config.out_dir);
  out.write("shocks.csv", decomposition_report_csv(run.events, run.shocks));
  return out.finish(config, "identify", &run, {}, {}, started);
}

RunArtifacts run_simulate(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (!config.seed) throw Error(Errc::config_error, "run.seed (or --seed) is required");
  auto params = default_dgp(config.synthetic_T, config.synthetic_seed.value_or(config.master_seed()));
  params.events_per_month = config.synthetic_events_per_month;
  const auto sim = simulate_dgp(params, std::max(config.varx.horizon, config.lp.horizon));
  ArtifactWriter out(config.out_dir);
  out.write("panel.csv", panel_to_csv(sim.panel));
  out.write("surprises.csv", surprises_to_csv(sim.surprises));
  EventSurprises events = sim.surprises;
  out.write("shocks_true.csv", decomposition_report_csv(events, sim.shocks));
  out.write("truth.csv", truth_to_csv(sim));
  nlohmann::json extra;
  extra["dgp"] = {{"T", params.T},
                  {"seed", params.seed},
                  {"theta", params.theta},
                  {"events_per_month", params.events_per_month},
                  {"spectral_radius", companion_spectral_radius(params.lags)}};
  return out.finish(config, "simulate", nullptr, {}, extra, started);
}

}  // namespace spillover
