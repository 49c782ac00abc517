#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spillover {

/// Pointwise impulse-response band. Matrices are n_variables x (horizon + 1).
struct IrfBand {
  std::vector<std::string> variables;
  int horizon = 0;
  Eigen::MatrixXd lo;
  Eigen::MatrixXd point;
  Eigen::MatrixXd hi;
  std::string engine;   // "bvar" or "local_projection"
  std::string variant;  // "pure_mp", "info", "raw_hfi", ...
  double shock_scale = 1.0;  // one standard deviation of the shock, in its raw units
};

/// Sample quantile with linear interpolation between order statistics (R type 7).
/// `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double q);

/// Pointwise 5/50/95 percentiles (or lo_q/hi_q) across a set of response paths.
IrfBand band_from_draws(std::span<const Eigen::MatrixXd> draws, std::vector<std::string> variables,
                        double lo_q = 0.05, double hi_q = 0.95);

/// CSV with columns variable,horizon,lo,median,hi.
std::string irf_to_csv(const IrfBand& band);

/// Standalone SVG fan chart for one variable of the band.
std::string fan_chart_svg(const IrfBand& band, int variable);

}  // namespace spillover
