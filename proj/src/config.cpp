#include "spillover/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/program_options.hpp>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"

namespace po = boost::program_options;

namespace spillover {

std::string_view to_string(Identification id) {
  switch (id) {
    case Identification::median_rotation: return "median_rotation";
    case Identification::poor_mans: return "poor_mans";
    case Identification::fixed_angle: return "fixed_angle";
    case Identification::uniform_rotations: return "uniform_rotations";
  }
  return "unknown";
}

std::string_view to_string(ShockVariant v) {
  switch (v) {
    case ShockVariant::pure_mp: return "pure_mp";
    case ShockVariant::info: return "info";
    case ShockVariant::raw_hfi: return "raw_hfi";
  }
  return "unknown";
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::bvar: return "bvar";
    case Engine::local_projection: return "local_projection";
  }
  return "unknown";
}

namespace {

const std::vector<std::string>& keys() {
  static const std::vector<std::string> k = {
      "data.panel", "data.surprises", "data.columns",
      "synthetic.enabled", "synthetic.T", "synthetic.events_per_month", "synthetic.seed",
      "identification.method", "identification.angle", "identification.n_rot", "identification.grid",
      "shock.variant",
      "sample.start", "sample.end", "sample.covid_dummy",
      "run.engines", "run.seed", "run.threads",
      "bvar.lags", "bvar.horizon", "bvar.draws", "bvar.lambda1", "bvar.lambda3", "bvar.lambda4",
      "bvar.own_lag_mean", "bvar.trend", "bvar.exo_lags",
      "lp.horizon", "lp.shock_lags", "lp.dep_lags", "lp.domestic_lags", "lp.foreign_lags", "lp.inference",
      "lp.bandwidth_offset", "lp.common_sample", "lp.aic", "lp.trend", "lp.standardize",
      "lp.domestic_controls", "lp.foreign_controls",
      "output.dir",
  };
  return k;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& expected) {
  throw Error(Errc::config_error, key + " = '" + value + "': expected " + expected);
}

std::string trimmed(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T to_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad(key, value, "a number");
  return out;
}

int to_int(const std::string& key, const std::string& value, int min) {
  int v = to_number<int>(key, value);
  if (v < min) bad(key, value, "an integer >= " + std::to_string(min));
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad(key, value, "true or false");
}

YearMonth to_month(const std::string& key, const std::string& value) {
  try {
    return parse_year_month(value);
  } catch (const Error&) {
    bad(key, value, "YYYY-MM");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

void apply(RunConfig& c, const std::string& key, const std::string& value, const std::filesystem::path& base) {
  if (key == "data.panel") {
    c.panel_path = resolve(base, value);
  } else if (key == "data.surprises") {
    c.surprises_path = resolve(base, value);
  } else if (key == "data.columns") {
    c.columns.clear();
    try {
      for (const auto& item : split_list(value)) c.columns.push_back(parse_column_spec(item));
    } catch (const Error& e) {
      bad(key, value, std::string("name:transform:role entries (") + e.what() + ")");
    }
  } else if (key == "synthetic.enabled") {
    c.synthetic = to_bool(key, value);
  } else if (key == "synthetic.T") {
    c.synthetic_T = to_int(key, value, 10);
  } else if (key == "synthetic.events_per_month") {
    c.synthetic_events_per_month = to_int(key, value, 1);
  } else if (key == "synthetic.seed") {
    c.synthetic_seed = to_number<std::uint64_t>(key, value);
  } else if (key == "identification.method") {
    if (value == "median_rotation") c.identification = Identification::median_rotation;
    else if (value == "poor_mans") c.identification = Identification::poor_mans;
    else if (value == "fixed_angle") c.identification = Identification::fixed_angle;
    else if (value == "uniform_rotations") c.identification = Identification::uniform_rotations;
    else bad(key, value, "median_rotation, poor_mans, fixed_angle or uniform_rotations");
  } else if (key == "identification.angle") {
    c.fixed_angle = to_number<double>(key, value);
  } else if (key == "identification.n_rot") {
    c.n_rot = to_int(key, value, 1);
  } else if (key == "identification.grid") {
    c.grid_size = to_int(key, value, 4);
  } else if (key == "shock.variant") {
    if (value == "pure_mp") c.variant = ShockVariant::pure_mp;
    else if (value == "info") c.variant = ShockVariant::info;
    else if (value == "raw_hfi") c.variant = ShockVariant::raw_hfi;
    else bad(key, value, "pure_mp, info or raw_hfi");
  } else if (key == "sample.start") {
    c.window_start = to_month(key, value);
  } else if (key == "sample.end") {
    c.window_end = to_month(key, value);
  } else if (key == "sample.covid_dummy") {
    c.covid_dummy = to_bool(key, value);
  } else if (key == "run.engines") {
    c.engines.clear();
    for (const auto& item : split_list(value)) {
      if (item == "bvar") c.engines.push_back(Engine::bvar);
      else if (item == "local_projection" || item == "lp") c.engines.push_back(Engine::local_projection);
      else bad(key, value, "a list of bvar, local_projection");
    }
  } else if (key == "run.seed") {
    c.seed = to_number<std::uint64_t>(key, value);
  } else if (key == "run.threads") {
    c.threads = to_int(key, value, 0);
  } else if (key == "bvar.lags") {
    c.varx.p = to_int(key, value, 1);
  } else if (key == "bvar.horizon") {
    c.varx.horizon = to_int(key, value, 0);
  } else if (key == "bvar.draws") {
    c.n_draws = to_int(key, value, 1);
  } else if (key == "bvar.lambda1") {
    c.varx.hyper.lambda1 = to_number<double>(key, value);
  } else if (key == "bvar.lambda3") {
    c.varx.hyper.lambda3 = to_number<double>(key, value);
  } else if (key == "bvar.lambda4") {
    c.varx.hyper.lambda4 = to_number<double>(key, value);
  } else if (key == "bvar.own_lag_mean") {
    c.varx.hyper.own_lag_mean = to_number<double>(key, value);
  } else if (key == "bvar.trend") {
    c.varx.trend = to_bool(key, value);
  } else if (key == "bvar.exo_lags") {
    c.varx.exo_lags = to_int(key, value, 0);
  } else if (key == "lp.horizon") {
    c.lp.horizon = to_int(key, value, 0);
  } else if (key == "lp.shock_lags") {
    c.lp.shock_lags = to_int(key, value, 0);
  } else if (key == "lp.dep_lags") {
    c.lp.dep_lags = to_int(key, value, 0);
  } else if (key == "lp.domestic_lags") {
    c.lp.domestic_lags = to_int(key, value, 0);
  } else if (key == "lp.foreign_lags") {
    c.lp.foreign_lags = to_int(key, value, 0);
  } else if (key == "lp.inference") {
    if (value == "newey_west") c.lp.inference = lp::Inference::newey_west;
    else if (value == "white") c.lp.inference = lp::Inference::white;
    else bad(key, value, "newey_west or white");
  } else if (key == "lp.bandwidth_offset") {
    c.lp.bandwidth_offset = to_int(key, value, 0);
  } else if (key == "lp.common_sample") {
    c.lp.common_sample = to_bool(key, value);
  } else if (key == "lp.aic") {
    c.lp.select_lags_aic = to_bool(key, value);
  } else if (key == "lp.trend") {
    c.lp.trend = to_bool(key, value);
  } else if (key == "lp.standardize") {
    c.lp.standardize = to_bool(key, value);
  } else if (key == "lp.domestic_controls") {
    c.lp.domestic_controls = split_list(value);
    c.lp_auto_controls = false;
  } else if (key == "lp.foreign_controls") {
    c.lp.foreign_controls = split_list(value);
    c.lp_auto_controls = false;
  } else if (key == "output.dir") {
    c.out_dir = resolve(base, value);
  }
}

}  // namespace

std::vector<std::string> config_keys() { return keys(); }

void RunConfig::validate() const {
  if (engines.empty()) throw Error(Errc::config_error, "run.engines: at least one engine required");
  if (!seed) throw Error(Errc::config_error, "run.seed (or --seed) is required");
  if (!synthetic) {
    if (!panel_path) throw Error(Errc::config_error, "data.panel is required unless synthetic.enabled = true");
    if (!surprises_path) throw Error(Errc::config_error, "data.surprises is required unless synthetic.enabled = true");
    if (columns.empty()) throw Error(Errc::config_error, "data.columns is required with data.panel");
  }
  if (window_start && window_end && *window_end < *window_start) {
    throw Error(Errc::config_error, "sample.end precedes sample.start");
  }
  if (synthetic_events_per_month > 4) throw Error(Errc::config_error, "synthetic.events_per_month must be <= 4");
  try {
    varx.validate();
    lp.validate();
  } catch (const Error& e) {
    throw Error(Errc::config_error, e.what());
  }
}

std::uint64_t RunConfig::master_seed() const {
  if (!seed) throw Error(Errc::config_error, "no seed configured");
  return *seed;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  po::options_description desc;
  for (const auto& k : keys()) desc.add_options()(k.c_str(), po::value<std::string>());
  po::variables_map vm;
  try {
    std::istringstream in(text);
    po::store(po::parse_config_file(in, desc, false), vm);
  } catch (const po::error& e) {
    throw Error(Errc::config_error, e.what());
  }
  RunConfig config;
  for (const auto& k : keys()) {
    if (!vm.count(k)) continue;
    const auto value = trimmed(vm[k].as<std::string>());
    config.entries[k] = value;
    apply(config, k, value, base_dir);
  }
  config.varx.covid = config.covid_dummy;
  config.lp.covid = config.covid_dummy;
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace spillover
