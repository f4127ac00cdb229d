#include "burgulence/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"

namespace burgulence {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string short_number(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

}  // namespace

std::string svg_loglog(std::string_view title, std::string_view x_label, std::string_view y_label,
                       std::span<const PlotSeries> series) {
  double x0 = infinity, x1 = 0.0, y0 = infinity, y1 = 0.0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0 && s.ys[i] > 0.0)) continue;
      x0 = std::min(x0, s.xs[i]);
      x1 = std::max(x1, s.xs[i]);
      y0 = std::min(y0, s.ys[i]);
      y1 = std::max(y1, s.ys[i]);
    }
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  if (!(x1 > 0.0)) {
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height / 2 << "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
    return svg.str();
  }
  const double lx0 = std::floor(std::log10(x0)), lx1 = std::max(std::ceil(std::log10(x1)), lx0 + 1);
  const double ly0 = std::floor(std::log10(y0)), ly1 = std::max(std::ceil(std::log10(y1)), ly0 + 1);
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double y) { return top + (ly1 - std::log10(y)) / (ly1 - ly0) * ph; };

  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int y_step = static_cast<int>(std::ceil((ly1 - ly0) / 8.0));
  for (double d = lx0; d <= lx1; d += 1.0) {
    const double x = left + (d - lx0) / (lx1 - lx0) * pw;
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << top << "\" x2=\"" << fixed(x) << "\" y2=\"" << top + ph
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << fixed(x) << "\" y=\"" << top + ph + 16
        << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
  }
  for (double d = ly0; d <= ly1; d += y_step) {
    const double y = top + (ly1 - d) / (ly1 - ly0) * ph;
    svg << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + pw << "\" y2=\"" << fixed(y)
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << escape(y_label) << "</text>\n";

  int colour = 0;
  double legend_y = top + 10;
  for (const auto& s : series) {
    const char* stroke = s.guide ? "#555" : palette[colour++ % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\""
        << (s.guide ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0 && s.ys[i] > 0.0)) continue;
      svg << fixed(px(s.xs[i])) << ',' << fixed(py(std::clamp(s.ys[i], std::pow(10.0, ly0), std::pow(10.0, ly1))))
          << ' ';
    }
    svg << "\"/>\n<line x1=\"" << left + pw + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << left + pw + 34
        << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\""
        << (s.guide ? " stroke-dasharray=\"6 4\"" : "") << "/>\n<text x=\"" << left + pw + 38 << "\" y=\""
        << legend_y + 4 << "\">" << escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

PlotSeries guide_line(std::string label, double slope, std::span<const double> xs,
                      std::span<const double> ys, double x_lo, double x_hi) {
  double lx = 0.0, ly = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= x_lo && xs[i] <= x_hi && xs[i] > 0.0 && ys[i] > 0.0) {
      lx += std::log(xs[i]);
      ly += std::log(ys[i]);
      ++count;
    }
  }
  PlotSeries g{std::move(label), {}, {}, true};
  if (count == 0 || !(x_hi > x_lo) || !(x_lo > 0.0)) return g;
  lx /= count;
  ly /= count;
  for (double x : {x_lo, x_hi}) {
    g.xs.push_back(x);
    g.ys.push_back(std::exp(ly + slope * (std::log(x) - lx)));
  }
  return g;
}

std::string markdown_report(std::span<const SweepRun> runs, std::span<const ScalingFit> fits,
                            std::string_view config_hash) {
  require(!runs.empty(), ErrorKind::domain, "report needs sweep results");
  const auto aggregates = aggregate_by_nu(runs);
  const auto finest = std::min_element(aggregates.begin(), aggregates.end(),
                                       [](const auto& a, const auto& b) { return a.nu < b.nu; });
  const DiagnosticsReport& r = *finest;
  const double j2_lo = r.ranges.J2.lo, j2_hi = r.ranges.J2.hi;

  std::ostringstream md;
  md << "# Sweep summary\n\n"
     << "burgulence " << version << ", config `" << (config_hash.empty() ? "none" : config_hash) << "`, "
     << aggregates.size() << " viscosities, " << runs.size() << " runs.\n\n";

  md << "## Fits\n\n| quantity | range | slope | stderr | predicted | tol | verdict |\n"
     << "|---|---|---|---|---|---|---|\n";
  std::size_t passed = 0, failed = 0;
  for (const auto& f : fits) {
    md << "| " << escape(f.quantity) << " | " << escape(f.window) << " | " << short_number(f.slope) << " | "
       << short_number(f.slope_stderr) << " | " << short_number(f.predicted) << " | "
       << short_number(f.tolerance) << " | " << to_string(f.verdict) << " |\n";
    passed += f.verdict == Verdict::pass;
    failed += f.verdict == Verdict::fail;
  }
  md << "\n" << passed << " asserted fits pass, " << failed << " fail.\n\n";

  md << "## Energy spectrum at nu = " << short_number(r.nu) << "\n\n";
  {
    PlotSeries e{"E(k)", {}, {}, false};
    for (const auto& row : r.spectrum_table) {
      e.xs.push_back(static_cast<double>(row.k));
      e.ys.push_back(row.value);
    }
    std::vector<PlotSeries> series{e, guide_line("k^-2", -2.0, e.xs, e.ys, 1.0 / j2_hi, 1.0 / j2_lo)};
    md << svg_loglog("E(k), M = " + short_number(r.spectrum_table.empty() ? 0.0 : r.spectrum_table.front().M),
                     "k", "E(k)", series)
       << "\n";
  }

  md << "## Structure functions at nu = " << short_number(r.nu) << "\n\n";
  {
    std::vector<PlotSeries> series;
    std::vector<double> ps;
    for (const auto& row : r.sp_table) {
      if (std::find(ps.begin(), ps.end(), row.p) == ps.end()) ps.push_back(row.p);
    }
    for (double p : ps) {
      PlotSeries s{"S_" + short_number(p), {}, {}, false};
      for (const auto& row : r.sp_table) {
        if (row.p == p) {
          s.xs.push_back(row.ell);
          s.ys.push_back(row.value);
        }
      }
      series.push_back(std::move(s));
    }
    const std::size_t data = series.size();
    for (std::size_t i = 0; i < data; ++i) {
      const double p = ps[i];
      if (p == 1.0 || p == ps.back()) {
        series.push_back(guide_line("ell^" + short_number(std::min(p, 1.0)), std::min(p, 1.0), series[i].xs,
                                    series[i].ys, j2_lo, j2_hi));
        series.push_back(guide_line("ell^" + short_number(p), p, series[i].xs, series[i].ys,
                                    series[i].xs.empty() ? 1.0 : series[i].xs.front(), r.ranges.J1.hi));
      }
    }
    md << svg_loglog("S_p(ell)", "ell", "S_p", series) << "\n";
  }

  md << "## Flatness at nu = " << short_number(r.nu) << "\n\n";
  {
    PlotSeries f{"F(ell)", {}, {}, false};
    for (const auto& row : r.flatness_table) {
      f.xs.push_back(row.ell);
      f.ys.push_back(row.value);
    }
    std::vector<PlotSeries> series{f, guide_line("ell^-1", -1.0, f.xs, f.ys, j2_lo, j2_hi)};
    md << svg_loglog("F(ell) = S_4 / S_2^2", "ell", "F", series) << "\n";
  }

  md << "## Ranges\n\nJ1 = (0, " << short_number(r.ranges.J1.hi) << "], J2 = (" << short_number(j2_lo) << ", "
     << short_number(j2_hi) << "], J3 = (" << short_number(r.ranges.J3.lo) << ", 1] with K = "
     << short_number(r.ranges.K) << ", C1 = " << short_number(r.ranges.C1) << ", C2 = "
     << short_number(r.ranges.C2) << ".\n";
  return md.str();
}

}  // namespace burgulence
