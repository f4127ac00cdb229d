#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "burgulence/cole_hopf.hpp"
#include "burgulence/error.hpp"
#include "burgulence/inviscid.hpp"
#include "burgulence/solver.hpp"

using namespace burgulence;

namespace {

PeriodicField sine(std::size_t n) {
  return PeriodicField::from_samples(sample_function(n, [](double x) { return std::sin(2.0 * pi * x); }));
}

// x - 1/2 on (0, 1) with the midpoint value 0 at the jump.
PeriodicField ramp(std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t j = 1; j < n; ++j) s[j] = static_cast<double>(j) / static_cast<double>(n) - 0.5;
  return PeriodicField::from_samples(s);
}

}  // namespace

TEST(ShockTime, SineIsOneOverTwoPi) {
  const auto st = shock_time(sine(4096), FluxModel::quadratic());
  EXPECT_NEAR(st.t_star, 1.0 / (2.0 * pi), 1e-6);
  EXPECT_TRUE(st.initial_discontinuities.empty());
}

TEST(ShockTime, RampNeverBreaksAndFlagsItsJump) {
  const auto st = shock_time(ramp(1024), FluxModel::quadratic());
  EXPECT_EQ(st.t_star, infinity);
  EXPECT_FALSE(st.initial_discontinuities.empty());
  for (double x : st.initial_discontinuities) EXPECT_TRUE(x < 0.01 || x > 0.99) << x;
}

TEST(ShockTime, ScalesWithFluxCurvature) {
  const auto u0 = sine(4096);
  const double quad = shock_time(u0, FluxModel::quadratic()).t_star;
  EXPECT_LT(shock_time(u0, FluxModel::quartic(0.5, 2.0)).t_star, quad);
  EXPECT_LT(shock_time(u0, FluxModel::cosh(2.0)).t_star, quad);
}

TEST(LaxOleinik, SineBeforeBreakingIsOddAtOrigin) {
  const auto [um, up] = lax_oleinik_eval(sine(1024), FluxModel::quadratic(), 0.05, 0.0);
  EXPECT_NEAR(um, 0.0, 1e-12);
  EXPECT_NEAR(up, 0.0, 1e-12);
}

TEST(LaxOleinik, RampOnSmoothPart) {
  const auto [um, up] = lax_oleinik_eval(ramp(1024), FluxModel::quadratic(), 1.0, 0.75);
  EXPECT_NEAR(um, 0.125, 1e-10);
  EXPECT_NEAR(up, 0.125, 1e-10);
}

TEST(LaxOleinik, RampStandingShock) {
  const auto [um, up] = lax_oleinik_eval(ramp(1024), FluxModel::quadratic(), 1.0, 0.0);
  EXPECT_NEAR(um, 0.25, 1e-10);
  EXPECT_NEAR(up, -0.25, 1e-10);
  // Rankine-Hugoniot for a symmetric flux: a standing shock needs u- = -u+.
  EXPECT_NEAR(um + up, 0.0, 1e-12);
}

TEST(Characteristics, SymmetryAndShortTimeLimit) {
  const auto u0 = sine(1024);
  const auto flux = FluxModel::quadratic();
  EXPECT_NEAR(characteristics_eval(u0, flux, 0.05, 0.0), 0.0, 1e-12);
  const double t = 1e-3;
  const double bound = 2.0 * norm_wmp(u0, 1, infinity) * flux.df(2.0 * pi) * t;
  for (double x : {0.1, 0.3, 0.77}) {
    EXPECT_LE(std::abs(characteristics_eval(u0, flux, t, x) - std::sin(2.0 * pi * x)), bound);
  }
}

TEST(Characteristics, RejectsTimesAfterBreaking) {
  const auto u0 = sine(1024);
  EXPECT_THROW(characteristics_eval(u0, FluxModel::quadratic(), 0.2, 0.3), Error);
}

TEST(LaxOleinikProperty, MatchesCharacteristicsBeforeBreaking) {
  const auto u0 = random_initial_condition(4096, 3);
  for (const auto& flux : {FluxModel::quadratic(), FluxModel::quartic(0.1, 2.0), FluxModel::cosh(2.0)}) {
    const double t_star = shock_time(u0, flux).t_star;
    LaxOleinik lo(u0, flux);
    for (double frac : {0.1, 0.5, 0.9}) {
      const double t = frac * t_star;
      for (int j = 0; j < 128; ++j) {
        const double x = j / 128.0;
        EXPECT_NEAR(lo.eval(t, x).u_minus, characteristics_eval(u0, flux, t, x), 1e-8)
            << to_string(flux.family()) << " t=" << t << " x=" << x;
      }
    }
  }
}

TEST(SolveInviscid, RampClosedForm) {
  const std::size_t n = 1024;
  const auto sol = solve_inviscid(ramp(n), FluxModel::quadratic(), 1.0, n);
  for (std::size_t j = 4; j < n - 4; ++j) {
    const double x = sol.field.grid_point(j);
    EXPECT_NEAR(sol.field.samples()[j], 0.5 * (x - 0.5), 1e-10) << x;
  }
  ASSERT_FALSE(sol.shocks.empty());
  EXPECT_LE(sol.conservation_defect, 1e-6);
}

TEST(SolveInviscid, SineShockAtHalf) {
  const auto u0 = sine(4096);
  const auto flux = FluxModel::quadratic();
  const double t = 2.0 * shock_time(u0, flux).t_star;
  const auto sol = solve_inviscid(u0, flux, t, 4096);
  ASSERT_EQ(sol.shocks.size(), 1u);
  EXPECT_NEAR(sol.shocks[0].x, 0.5, 1e-6);
  EXPECT_NEAR(sol.shocks[0].u_left, -sol.shocks[0].u_right, 1e-8);
  EXPECT_GT(sol.shocks[0].u_left, 0.0);
  // One-sided bound: the smooth part has u_x <= 1/t.
  const auto u = sol.field.samples();
  double slope = -infinity;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) slope = std::max(slope, (u[j + 1] - u[j]) * 4096.0);
  EXPECT_LE(slope, (1.0 / t) * (1.0 + 1e-2));
}

TEST(SolveInviscid, BoundsHoldForRandomData) {
  const std::size_t n = 8192;
  const auto u0 = random_initial_condition(n, 7);
  const double D = std::max(1.0 / norm_wmp(u0, 0, 1.0), norm_wmp(u0, 1, infinity));
  for (double t : {0.1, 0.5, 2.0, 8.0}) {
    const auto sol = solve_inviscid(u0, FluxModel::quadratic(), t, n);
    const auto u = sol.field.samples();
    const double bound = std::min(D, 1.0 / t) * (1.0 + 1e-3);
    double slope = -infinity, tv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = u[(j + 1) % n] - u[j];
      slope = std::max(slope, d * static_cast<double>(n));
      tv += std::abs(d);
    }
    EXPECT_LE(slope, bound) << t;
    EXPECT_LE(sol.field.max_abs(), bound) << t;
    EXPECT_LE(tv, 2.0 * bound) << t;
    EXPECT_LE(sol.conservation_defect, 1e-6) << t;
  }
}

TEST(SolveInviscid, VanishingViscosityAgainstColeHopf) {
  // Both routes are exact in their own regime; the L1 gap should shrink like nu.
  const std::size_t n = 8192;
  const auto u0 = sine(n);
  const double t = 0.5;
  const auto inviscid = solve_inviscid(u0, FluxModel::quadratic(), t, n);
  std::vector<double> gaps;
  for (double nu : {2e-2, 1e-2, 5e-3}) {
    const auto viscous = solve_classical(u0, nu, t, n);
    double l1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) l1 += std::abs(viscous.samples()[j] - inviscid.field.samples()[j]);
    gaps.push_back(l1 / n);
  }
  EXPECT_LE(gaps[1] / gaps[0], 0.7);
  EXPECT_LE(gaps[2] / gaps[1], 0.7);
}

TEST(SolveInviscid, ShocksCsv) {
  const auto sol = solve_inviscid(sine(1024), FluxModel::quadratic(), 0.5, 1024);
  std::ostringstream out;
  write_shocks_csv(out, sol, "h");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "x_shock,u_left,u_right");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(sol.shocks.size()));
}
