#include <gtest/gtest.h>

#include <cmath>

#include "burgulence/cole_hopf.hpp"
#include "burgulence/error.hpp"
#include "burgulence/solver.hpp"

using namespace burgulence;

namespace {

PeriodicField sine(std::size_t n, double amplitude = 1.0) {
  return PeriodicField::from_samples(
      sample_function(n, [amplitude](double x) { return amplitude * std::sin(2.0 * pi * x); }));
}

RunConfig sine_run(double nu, std::size_t n, double t_end, std::vector<double> times) {
  RunConfig c;
  c.nu = nu;
  c.u0 = sine(n);
  c.n_grid = n;
  c.t_end = t_end;
  c.snapshot_times = std::move(times);
  return c;
}

RunConfig turbulent_run(double nu, double t_end, double cfl, std::uint64_t seed = 1) {
  RunConfig c;
  c.nu = nu;
  c.n_grid = resolution_floor(nu);
  c.u0 = random_initial_condition(c.n_grid, seed);
  c.t_end = t_end;
  c.snapshot_times = snapshot_schedule(t_end, 32, 16, 1e-3 * t_end);
  c.cfl_safety = cfl;
  return c;
}

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a.samples()[j] - b.samples()[j]));
  return worst;
}

}  // namespace

TEST(ResolutionFloor, PowerOfTwoAboveSixteenOverNu) {
  EXPECT_EQ(resolution_floor(0.01), 2048u);
  EXPECT_EQ(resolution_floor(0.05), 512u);
  EXPECT_EQ(resolution_floor(1e-3), 16384u);
  EXPECT_EQ(resolution_floor(3e-4), 65536u);
}

TEST(StableDt, Examples) {
  RunConfig c;
  c.nu = 0.01;
  c.n_grid = 1024;
  EXPECT_DOUBLE_EQ(stable_dt(PeriodicField::zero(1024), c), 1.0 / 1024);
  EXPECT_DOUBLE_EQ(stable_dt(sine(1024), c), 0.4 / 1024);
  EXPECT_DOUBLE_EQ(stable_dt(sine(2048), c), 0.5 * stable_dt(sine(1024), c));
}

TEST(Step, ZeroIsFixedPoint) {
  RunConfig c;
  c.nu = 0.1;
  c.n_grid = 64;
  const auto out = step(PeriodicField::zero(64), 1e-3, c);
  for (double v : out.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Step, SmallModeDecaysAtTheHeatRate) {
  RunConfig c;
  c.nu = 0.1;
  c.n_grid = 256;
  const auto u0 = sine(256, 1e-6);
  const auto u1 = step(u0, 1e-3, c);
  const double factor = std::abs(u1.coefficient(1)) / std::abs(u0.coefficient(1));
  const double exact = std::exp(-4.0 * pi * pi * 0.1 * 1e-3);
  EXPECT_NEAR(factor / exact, 1.0, 1e-9);
}

TEST(Step, RejectsNonPositiveDt) {
  RunConfig c;
  c.nu = 0.1;
  c.n_grid = 64;
  EXPECT_THROW(step(sine(64), 0.0, c), Error);
}

TEST(Integrate, ZeroDurationReturnsInitialState) {
  const auto traj = integrate(sine_run(0.05, 512, 0.0, {0.0}));
  ASSERT_EQ(traj.snapshots.size(), 1u);
  EXPECT_EQ(traj.snapshots[0].t, 0.0);
  EXPECT_EQ(max_abs_diff(traj.snapshots[0].field, sine(512)), 0.0);
}

TEST(Integrate, MatchesColeHopf) {
  const auto run = sine_run(0.05, 512, 0.5, {0.1, 0.2, 0.3, 0.4, 0.5});
  const auto traj = integrate(run);
  ASSERT_EQ(traj.snapshots.size(), 5u);
  for (const auto& s : traj.snapshots) {
    EXPECT_LE(max_abs_diff(s.field, solve_classical(run.u0, run.nu, s.t, 512)), 1e-8) << s.t;
  }
}

TEST(Integrate, LandsExactlyOnSnapshotTimes) {
  const std::vector<double> times{0.0, 0.0123, 0.1, 0.31415};
  const auto traj = integrate(sine_run(0.05, 512, 0.31415, times));
  ASSERT_EQ(traj.snapshots.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_EQ(traj.snapshots[i].t, times[i]);
}

TEST(Integrate, RejectsGridBelowResolutionFloor) {
  auto run = sine_run(0.01, 1024, 0.1, {0.1});
  try {
    integrate(run);
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

TEST(Integrate, RejectsUnsortedSnapshots) {
  EXPECT_THROW(integrate(sine_run(0.05, 512, 0.5, {0.3, 0.2})), Error);
}

TEST(Integrate, OversizedStepBlowsUp) {
  // The integrating factor damps the stiff band, so only a grossly oversized step
  // (dt well above 16 nu) leaves an undamped unstable band.
  auto run = turbulent_run(1e-3, 2.0, 1000.0);
  run.snapshot_times = {2.0};
  EXPECT_THROW(integrate(run), InstabilityError);
}

TEST(EnergyBalance, LinearRegime) {
  RunConfig c = sine_run(0.1, 256, 0.5, snapshot_schedule(0.5, 10, 0, 0.0));
  c.u0 = sine(256, 1e-6);
  const auto traj = integrate(c);
  EXPECT_LE(energy_balance_residual(traj), 1e-8);
}

TEST(EnergyBalance, ZeroFieldIsZero) {
  RunConfig c = sine_run(0.1, 256, 0.5, {0.0, 0.25, 0.5});
  c.u0 = PeriodicField::zero(256);
  EXPECT_EQ(energy_balance_residual(integrate(c)), 0.0);
}

TEST(EnergyBalance, TurbulentRunAtResolutionFloor) {
  for (double cfl : {0.4, 1.0}) {
    const auto traj = integrate(turbulent_run(0.01, 2.0, cfl));
    EXPECT_LE(energy_balance_residual(traj), 1e-4) << cfl;
  }
}

TEST(SolverProperty, EnergyNonIncreasing) {
  const auto traj = integrate(turbulent_run(0.005, 1.0, 1.0, 3));
  for (std::size_t i = 1; i < traj.stats.size(); ++i) {
    EXPECT_LE(traj.stats[i].energy, traj.stats[i - 1].energy * (1.0 + 1e-14)) << i;
  }
}

TEST(SolverProperty, OleinikAmplitudeAndVariationBounds) {
  const auto run = turbulent_run(0.003, 4.0, 1.0, 2);
  const auto traj = integrate(run);
  const double D = std::max(1.0 / norm_wmp(run.u0, 0, 1.0), norm_wmp(run.u0, 1, infinity));
  for (const auto& s : traj.snapshots) {
    if (s.t <= 0.0) continue;
    const double bound = std::min(D, 1.0 / s.t) * (1.0 + 1e-3);
    const auto ux = derivative(s.field, 1);
    const double max_slope = *std::max_element(ux.samples().begin(), ux.samples().end());
    EXPECT_LE(max_slope, bound) << s.t;
    EXPECT_LE(s.field.max_abs(), bound) << s.t;
    EXPECT_LE(norm_wmp(s.field, 1, 1.0), 2.0 * bound) << s.t;
  }
}

TEST(SolverProperty, GridRefinementConverges) {
  const double nu = 0.02;
  auto coarse = turbulent_run(nu, 0.5, 0.4);
  coarse.snapshot_times = {0.1, 0.25, 0.5};
  auto fine = coarse;
  fine.n_grid *= 2;
  fine.u0 = random_initial_condition(fine.n_grid, 1);
  const auto a = integrate(coarse);
  const auto b = integrate(fine);
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_NEAR(norm_wmp(a.snapshots[i].field, 0, 2.0), norm_wmp(b.snapshots[i].field, 0, 2.0), 1e-6);
  }
}

TEST(SolverProperty, Deterministic) {
  const auto run = turbulent_run(0.01, 0.5, 1.0, 4);
  const auto a = integrate(run);
  const auto b = integrate(run);
  ASSERT_EQ(a.stats.size(), b.stats.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_EQ(max_abs_diff(a.snapshots[i].field, b.snapshots[i].field), 0.0);
  }
}

TEST(InitialCondition, NormalisedAndIndependentOfGrid) {
  const auto coarse = random_initial_condition(256, 42);
  const auto fine = random_initial_condition(1024, 42);
  for (std::size_t j = 0; j < 256; ++j) EXPECT_NEAR(coarse.samples()[j], fine.samples()[4 * j], 1e-14);
  EXPECT_NEAR(random_initial_condition(1 << 14, 42).max_abs(), 1.0, 1e-12);
  EXPECT_GT(max_abs_diff(coarse, random_initial_condition(256, 43)), 0.1);
}

TEST(SnapshotSchedule, SortedWithEndpoints) {
  const auto t = snapshot_schedule(2.0, 8, 8, 1e-3);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 2.0);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_NEAR(t[1], 1e-3, 1e-15);
  EXPECT_EQ(snapshot_schedule(0.0, 8, 0, 0.0), std::vector<double>{0.0});
}
