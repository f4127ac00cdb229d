#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "burgulence/report.hpp"

using namespace burgulence;

namespace {

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Svg, WellFormedWithGuide) {
  PlotSeries data{"E(k) <raw>", {1, 2, 4, 8, 16}, {1, 0.25, 0.0625, 0.015625, 0.00390625}, false};
  const auto guide = guide_line("k^-2", -2.0, data.xs, data.ys, 1.0, 16.0);
  EXPECT_TRUE(guide.guide);
  ASSERT_GE(guide.xs.size(), 2u);
  // The guide passes through the data here since the data is an exact power law.
  EXPECT_NEAR(guide.ys.front() * std::pow(guide.xs.front(), 2.0), 1.0, 1e-12);
  const std::vector<PlotSeries> series{data, guide};
  const auto svg = svg_loglog("spectrum", "k", "E", series);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 2u);  // guide line and its legend swatch
  EXPECT_NE(svg.find("&lt;raw&gt;"), std::string::npos);
  EXPECT_EQ(svg.find("<raw>"), std::string::npos);
}

TEST(Svg, DropsNonPositivePoints) {
  const std::vector<PlotSeries> series{{"s", {0.0, 1.0, 10.0}, {1.0, -1.0, 2.0}, false}};
  const auto svg = svg_loglog("t", "x", "y", series);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  const auto empty = svg_loglog("t", "x", "y", std::span<const PlotSeries>{});
  EXPECT_NE(empty.find("no data"), std::string::npos);
}

TEST(Markdown, ContainsPlotsAndGuides) {
  SweepConfig c;
  c.nu_list = {0.1};
  c.seeds = {1};
  c.cfl_safety = 1.0;
  const auto runs = sweep_nu(c);
  const std::vector<ScalingFit> fits;
  const auto md = markdown_report(runs, fits, "abc");
  EXPECT_NE(md.find("config `abc`"), std::string::npos);
  EXPECT_EQ(count(md, "<svg"), 3u);
  EXPECT_NE(md.find("k^-2"), std::string::npos);
  EXPECT_NE(md.find("ell^-1"), std::string::npos);
  EXPECT_NE(md.find("## Fits"), std::string::npos);
  EXPECT_THROW(markdown_report(std::span<const SweepRun>{}, fits, "abc"), std::exception);
}
