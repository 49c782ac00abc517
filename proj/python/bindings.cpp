#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "spillover/bvar.hpp"
#include "spillover/calendar.hpp"
#include "spillover/config.hpp"
#include "spillover/dataio.hpp"
#include "spillover/dgp.hpp"
#include "spillover/error.hpp"
#include "spillover/localproj.hpp"
#include "spillover/pipeline.hpp"
#include "spillover/shockid.hpp"

namespace py = pybind11;
using namespace spillover;

namespace {

// Events need strictly increasing dates; when the caller has none, one per month from 2000-01 is used.
EventSurprises make_events(const Eigen::VectorXd& ir, const Eigen::VectorXd& eq,
                           const std::optional<std::vector<std::string>>& dates) {
  if (ir.size() != eq.size()) throw Error(Errc::invalid_argument, "ir and eq differ in length");
  if (dates && dates->size() != static_cast<std::size_t>(ir.size())) {
    throw Error(Errc::invalid_argument, "dates and surprises differ in length");
  }
  EventSurprises ev;
  for (Eigen::Index i = 0; i < ir.size(); ++i) {
    Day d;
    if (dates) {
      d = parse_day((*dates)[i]);
    } else {
      const auto ym = YearMonth{2000, 1}.plus(static_cast<int>(i));
      d = Day{ym.year, ym.month, 1};
    }
    ev.events.push_back({d, ir(i), eq(i)});
  }
  ev.validate();
  return ev;
}

MonthlyPanel make_panel(const Eigen::MatrixXd& values, const std::optional<std::vector<std::string>>& names,
                        const std::string& start) {
  if (names && names->size() != static_cast<std::size_t>(values.cols())) {
    throw Error(Errc::invalid_argument, "names and panel columns differ in length");
  }
  MonthlyPanel p;
  p.start = parse_year_month(start);
  p.values = values;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    p.columns.push_back({names ? (*names)[j] : "y" + std::to_string(j + 1)});
  }
  return p;
}

py::dict band_dict(const IrfBand& b) {
  py::dict d;
  d["variables"] = b.variables;
  d["lo"] = b.lo;
  d["median"] = b.point;
  d["hi"] = b.hi;
  d["shock_scale"] = b.shock_scale;
  d["engine"] = b.engine;
  return d;
}

py::dict shocks_dict(const ShockSeries& s) {
  py::dict d;
  d["mp"] = s.mp;
  d["info"] = s.info;
  d["theta"] = s.theta;
  d["method"] = std::string(to_string(s.method));
  return d;
}

std::vector<std::string> day_strings(const std::vector<Day>& days) {
  std::vector<std::string> out;
  out.reserve(days.size());
  for (const auto& d : days) out.push_back(format(d));
  return out;
}

}  // namespace

PYBIND11_MODULE(_spillover, m) {
  m.doc() = "Native core of the spillover package";
  m.attr("__version__") = kVersion;

  static PyObject* error_type = py::exception<Error>(m, "SpilloverError").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def(
      "admissible_angles",
      [](const Eigen::Matrix2d& chol, int grid) { return admissible_angles(chol, RotationGrid(grid)); },
      py::arg("chol"), py::arg("grid") = 999, "Grid angles whose rotated impact matrix meets the sign pattern.");

  m.def(
      "identify",
      [](const Eigen::VectorXd& ir, const Eigen::VectorXd& eq, int grid) {
        const auto dec = identify_median(make_events(ir, eq, std::nullopt), RotationGrid(grid));
        py::dict d;
        d["theta_star"] = dec.theta_star;
        d["admissible"] = dec.admissible;
        d["mean"] = dec.mean;
        d["covariance"] = dec.covariance;
        d["chol"] = dec.chol;
        return d;
      },
      py::arg("ir"), py::arg("eq"), py::arg("grid") = 999,
      "Median-rotation identification of paired interest-rate and equity surprises.");

  m.def(
      "decompose",
      [](const Eigen::VectorXd& ir, const Eigen::VectorXd& eq, std::optional<double> theta, int grid) {
        const auto ev = make_events(ir, eq, std::nullopt);
        const auto dec = identify_median(ev, RotationGrid(grid));
        return shocks_dict(decompose(ev, dec, theta ? *theta : dec.theta_star));
      },
      py::arg("ir"), py::arg("eq"), py::arg("theta") = py::none(), py::arg("grid") = 999,
      "Structural policy and information shocks at the median rotation, or at a given admissible angle.");

  m.def(
      "poor_mans_split",
      [](const Eigen::VectorXd& ir, const Eigen::VectorXd& eq) {
        return shocks_dict(poor_mans_split(make_events(ir, eq, std::nullopt)));
      },
      py::arg("ir"), py::arg("eq"), "Assign each rate surprise by the sign of its co-movement with equities.");

  m.def(
      "simulate",
      [](int T, std::uint64_t seed, int horizon) {
        const auto sim = simulate_dgp(default_dgp(T, seed), horizon);
        py::dict d;
        d["start"] = format(sim.panel.start);
        d["names"] = sim.panel.names();
        d["values"] = sim.panel.values;
        d["event_dates"] = day_strings(sim.shocks.dates);
        const auto M = sim.surprises.matrix();
        d["ir"] = Eigen::VectorXd(M.col(0));
        d["eq"] = Eigen::VectorXd(M.col(1));
        d["mp_monthly"] = sim.monthly.mp;
        d["info_monthly"] = sim.monthly.info;
        d["truth_mp"] = sim.truth.mp_response;
        d["truth_info"] = sim.truth.info_response;
        d["theta"] = sim.truth.theta;
        return d;
      },
      py::arg("T") = 300, py::arg("seed") = 0, py::arg("horizon") = 36,
      "Simulate the built-in three-variable economy driven by policy and information shocks.");

  m.def(
      "bvar_irf",
      [](const Eigen::MatrixXd& values, const Eigen::VectorXd& shock, std::optional<std::vector<std::string>> names,
         const std::string& start, int horizon, int lags, int draws, std::uint64_t seed, int threads, bool covid) {
        bvar::VarxSpec spec;
        spec.horizon = horizon;
        spec.p = lags;
        spec.covid = covid;
        bvar::IrfOptions opt;
        opt.n_draws = draws;
        opt.seed = seed;
        opt.threads = threads;
        const auto panel = make_panel(values, names, start);
        IrfBand band;
        {
          py::gil_scoped_release release;
          band = bvar::estimate_irf(panel, shock, spec, opt);
        }
        return band_dict(band);
      },
      py::arg("values"), py::arg("shock"), py::arg("names") = py::none(), py::arg("start") = "2000-01",
      py::arg("horizon") = 36, py::arg("lags") = 3, py::arg("draws") = 2000, py::arg("seed") = 0,
      py::arg("threads") = 1, py::arg("covid") = true,
      "Bayesian VARX responses to a one-standard-deviation shock, with 90% posterior bands.");

  m.def(
      "lp_irf",
      [](const Eigen::MatrixXd& values, const Eigen::VectorXd& shock, std::optional<std::vector<std::string>> names,
         const std::string& start, int horizon, int lags, std::optional<std::vector<std::string>> controls,
         int threads, bool covid) {
        const auto panel = make_panel(values, names, start);
        lp::LpSpec spec;
        spec.horizon = horizon;
        spec.shock_lags = spec.dep_lags = spec.domestic_lags = spec.foreign_lags = lags;
        spec.covid = covid;
        spec.domestic_controls = controls ? *controls : panel.names();
        IrfBand band;
        {
          py::gil_scoped_release release;
          band = lp::lp_band(panel, shock, spec, threads);
        }
        return band_dict(band);
      },
      py::arg("values"), py::arg("shock"), py::arg("names") = py::none(), py::arg("start") = "2000-01",
      py::arg("horizon") = 36, py::arg("lags") = 3, py::arg("controls") = py::none(), py::arg("threads") = 1,
      py::arg("covid") = true,
      "Local-projection responses with Newey-West 90% bands. Controls default to every panel column.");

  m.def(
      "run",
      [](const std::filesystem::path& config_path, const std::string& command, std::optional<std::uint64_t> seed,
         std::optional<std::filesystem::path> out, std::optional<int> threads, std::optional<int> n_rot) {
        auto config = load_config(config_path);
        if (seed) config.seed = *seed;
        if (out) config.out_dir = *out;
        if (threads) config.threads = *threads;
        if (n_rot) config.n_rot = *n_rot;
        config.validate();
        RunArtifacts art;
        py::gil_scoped_release release;
        if (command == "identify") art = run_identify(config);
        else if (command == "estimate") art = run_pipeline(config);
        else if (command == "compare-variants") art = compare_shock_variants(config);
        else if (command == "rotation-bands") art = run_rotation_bands(config);
        else if (command == "simulate") art = run_simulate(config);
        else throw Error(Errc::invalid_argument, "unknown command '" + command + "'");
        return art.files;
      },
      py::arg("config"), py::arg("command") = "estimate", py::arg("seed") = py::none(), py::arg("out") = py::none(),
      py::arg("threads") = py::none(), py::arg("n_rot") = py::none(),
      "Run a CLI subcommand from a config file and return the written artifact paths.");
}
