#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burgulence/scaling.hpp"

namespace burgulence {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool guide = false;  ///< drawn dashed
};

/// Self-contained log-log line plot. Nonpositive points are dropped.
std::string svg_loglog(std::string_view title, std::string_view x_label, std::string_view y_label,
                       std::span<const PlotSeries> series);

/// c x^slope through the geometric middle of (xs, ys) over [x_lo, x_hi].
PlotSeries guide_line(std::string label, double slope, std::span<const double> xs,
                      std::span<const double> ys, double x_lo, double x_hi);

/// Markdown summary: fit table, E(k) with a k^-2 guide, S_p(ell) with guide slopes
/// and F(ell) with an ell^-1 guide, for the smallest nu of the sweep.
std::string markdown_report(std::span<const SweepRun> runs, std::span<const ScalingFit> fits,
                            std::string_view config_hash);

}  // namespace burgulence
