#include "spillover/irf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spillover/dataio.hpp"
#include "spillover/error.hpp"

namespace spillover {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(Errc::invalid_argument, "quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

IrfBand band_from_draws(std::span<const Eigen::MatrixXd> draws, std::vector<std::string> variables, double lo_q,
                        double hi_q) {
  if (draws.empty()) throw Error(Errc::invalid_argument, "no draws to summarize");
  const auto n = draws.front().rows();
  const auto cols = draws.front().cols();
  if (static_cast<Eigen::Index>(variables.size()) != n) {
    throw Error(Errc::invalid_argument, "variable names do not match response rows");
  }
  IrfBand band;
  band.variables = std::move(variables);
  band.horizon = static_cast<int>(cols) - 1;
  band.lo.resize(n, cols);
  band.point.resize(n, cols);
  band.hi.resize(n, cols);
  std::vector<double> cell(draws.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index h = 0; h < cols; ++h) {
      for (std::size_t d = 0; d < draws.size(); ++d) cell[d] = draws[d](i, h);
      std::sort(cell.begin(), cell.end());
      band.lo(i, h) = quantile_sorted(cell, lo_q);
      band.point(i, h) = quantile_sorted(cell, 0.5);
      band.hi(i, h) = quantile_sorted(cell, hi_q);
    }
  }
  return band;
}

std::string irf_to_csv(const IrfBand& band) {
  std::string out = "variable,horizon,lo,median,hi\n";
  for (std::size_t i = 0; i < band.variables.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (int h = 0; h <= band.horizon; ++h) {
      out += band.variables[i] + "," + std::to_string(h) + "," + format_double(band.lo(r, h)) + "," +
             format_double(band.point(r, h)) + "," + format_double(band.hi(r, h)) + "\n";
    }
  }
  return out;
}

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string fan_chart_svg(const IrfBand& band, int variable) {
  if (variable < 0 || variable >= static_cast<int>(band.variables.size())) {
    throw Error(Errc::invalid_argument, "variable index out of range");
  }
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const Eigen::RowVectorXd lo = band.lo.row(variable);
  const Eigen::RowVectorXd mid = band.point.row(variable);
  const Eigen::RowVectorXd hi = band.hi.row(variable);
  double ymin = std::min(0.0, lo.minCoeff());
  double ymax = std::max(0.0, hi.maxCoeff());
  if (!(ymax - ymin > 1e-12)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const int H = std::max(band.horizon, 1);

  auto x_at = [&](double h) { return kLeft + plot_w * h / H; };
  auto y_at = [&](double v) { return kTop + plot_h * (ymax - v) / (ymax - ymin); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape_xml(band.variables[variable]) + " (" + escape_xml(band.engine) + ", " + escape_xml(band.variant) +
         ")</text>\n";

  // y grid and labels
  const double step = nice_step(ymax - ymin, 5);
  for (double v = std::ceil(ymin / step) * step; v <= ymax + 1e-12; v += step) {
    const std::string y = fixed(y_at(v));
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + y + "\" x2=\"" + fixed(kLeft + plot_w) + "\" y2=\"" + y +
           "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(y_at(v) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           fixed(std::abs(v) < step * 1e-9 ? 0.0 : v, step < 0.01 ? 4 : (step < 1 ? 2 : 1)) + "</text>\n";
  }
  // x ticks
  const int xstep = std::max(1, static_cast<int>(nice_step(H, 6)));
  for (int h = 0; h <= band.horizon; h += xstep) {
    svg += "<text x=\"" + fixed(x_at(h)) + "\" y=\"" + fixed(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(h) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">months after shock</text>\n";

  // band
  std::string poly;
  for (int h = 0; h <= band.horizon; ++h) poly += fixed(x_at(h)) + "," + fixed(y_at(hi(h))) + " ";
  for (int h = band.horizon; h >= 0; --h) poly += fixed(x_at(h)) + "," + fixed(y_at(lo(h))) + " ";
  poly.pop_back();
  svg += "<polygon points=\"" + poly + "\" fill=\"#4a7ebb\" fill-opacity=\"0.3\" stroke=\"none\"/>\n";

  // zero line and median path
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(y_at(0)) + "\" x2=\"" + fixed(kLeft + plot_w) +
         "\" y2=\"" + fixed(y_at(0)) + "\" stroke=\"#808080\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
  std::string line;
  for (int h = 0; h <= band.horizon; ++h) line += fixed(x_at(h)) + "," + fixed(y_at(mid(h))) + " ";
  line.pop_back();
  svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";

  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(plot_w) + "\" height=\"" +
         fixed(plot_h) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace spillover
