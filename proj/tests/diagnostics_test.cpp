#include <gtest/gtest.h>

#include <cmath>

#include "burgulence/cole_hopf.hpp"
#include "burgulence/diagnostics.hpp"
#include "burgulence/error.hpp"
#include "burgulence/solver.hpp"

using namespace burgulence;

namespace {

PeriodicField sine(std::size_t n, double amplitude = 1.0) {
  return PeriodicField::from_samples(
      sample_function(n, [amplitude](double x) { return amplitude * std::sin(2.0 * pi * x); }));
}

PeriodicField nwave(std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t j = 1; j < n; ++j) s[j] = static_cast<double>(j) / static_cast<double>(n) - 0.5;
  return PeriodicField::from_samples(s);
}

// Unit ramp with a tanh cliff of width nu at x = 1/2; the cliff slope is 1 - 1/(2 nu).
PeriodicField cliff(std::size_t n, double nu) {
  return PeriodicField::from_samples(sample_function(n, [nu](double x) {
    const double s = x - 0.5;
    return s - 0.5 * std::tanh(s / nu);
  }));
}

std::vector<double> unit_times(int count) {
  std::vector<double> t(count + 1);
  for (int i = 0; i <= count; ++i) t[i] = static_cast<double>(i) / count;
  return t;
}

Trajectory frozen(const PeriodicField& field, double nu = 0.01) {
  Trajectory traj;
  traj.config.nu = nu;
  traj.config.n_grid = field.size();
  traj.config.u0 = field;
  for (double t : unit_times(128)) traj.snapshots.push_back({t, field});
  return traj;
}

const WindowSpec unit_window{2.0, 1.0, 1.0, 0.0, 1.0};

}  // namespace

TEST(QuantityD, Examples) {
  EXPECT_NEAR(quantity_D(sine(1024)), 2.0 * pi, 1e-10);
  EXPECT_NEAR(quantity_D(sine(1024, 0.1)), 5.0 * pi, 1e-5 * 5.0 * pi);
  EXPECT_THROW(quantity_D(PeriodicField::zero(64)), Error);
}

TEST(AveragingWindow, Examples) {
  const auto w = averaging_window(2.0 * pi, 1.0, 10.0);
  EXPECT_DOUBLE_EQ(w.T1, 1.0 / (160.0 * pi * pi));
  EXPECT_DOUBLE_EQ(w.T2, 4.0 * pi);
  const auto v = averaging_window(1.1, 10.0, 1.0);
  EXPECT_NEAR(v.T1, 0.20661, 1e-5);
  EXPECT_NEAR(v.T2, 0.30992, 1e-5);
  EXPECT_EQ(v.T2, 1.5 * v.T1);
  EXPECT_THROW(averaging_window(2.0, 1.0, 0.0), Error);
  EXPECT_THROW(averaging_window(2.0, -1.0, 1.0), Error);
}

TEST(AveragingWindow, FormulasExact) {
  for (double D : {1.5, 7.0, 40.0}) {
    for (double C : {0.3, 2.0}) {
      const auto w = averaging_window(D, 1.0, C);
      EXPECT_EQ(w.T1, 0.25 * std::pow(D, -2.0) / C);
      EXPECT_EQ(w.T2, std::max(1.5 * w.T1, 2.0 * D));
    }
  }
}

TEST(EstimateCTilde, SingleDecayingMode) {
  RunConfig c;
  c.nu = 0.1;
  c.n_grid = 256;
  c.u0 = sine(256, 1e-3);
  c.t_end = 0.2;
  c.snapshot_times = {0.0, 0.2};
  const auto traj = integrate(c);
  // Sup of nu |u_x|^2 sits at t = 0: nu (2 pi)^2 a^2 / 2.
  EXPECT_NEAR(estimate_C_tilde(traj), 1.5 * 0.1 * 2.0 * pi * pi * 1e-6, 1e-15);
}

TEST(TimeAverage, LinearFunctional) {
  // The snapshot at time t is t sin(2 pi x), so |u|_inf = t.
  Trajectory traj;
  for (double t : unit_times(128)) traj.snapshots.push_back({t, sine(64, std::max(t, 1e-300))});
  const auto amp = Functional::custom("amp", [](const PeriodicField& f) { return f.max_abs(); });
  EXPECT_NEAR(time_average(traj, unit_window, amp, 1.0), 0.5, 1e-12);
  EXPECT_NEAR(time_average(traj, unit_window, amp, 2.0), std::sqrt(1.0 / 3.0), 2e-5);
  const auto constant = Functional::custom("c", [](const PeriodicField&) { return 3.5; });
  EXPECT_NEAR(time_average(traj, unit_window, constant, 0.5), 3.5, 1e-12);
}

TEST(TimeAverage, SparseSnapshotsAreACoverageError) {
  Trajectory traj;
  for (double t : {0.0, 0.5, 1.0}) traj.snapshots.push_back({t, sine(64)});
  try {
    time_average(traj, unit_window, Functional::energy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::coverage);
  }
}

TEST(StructureFunction, FrozenSine) {
  const auto traj = frozen(sine(256));
  EXPECT_NEAR(structure_function(traj, unit_window, 2.0, 0.5), 2.0, 1e-12);
  EXPECT_NEAR(flatness(traj, unit_window, 0.5), 1.5, 1e-12);
  EXPECT_EQ(structure_function(frozen(PeriodicField::zero(64)), unit_window, 2.0, 0.25), 0.0);
  EXPECT_THROW(flatness(frozen(PeriodicField::zero(64)), unit_window, 0.25), Error);
}

TEST(EnergySpectrum, Examples) {
  EXPECT_NEAR(energy_spectrum(frozen(sine(256)), unit_window, 1, 1.0), 0.25, 1e-14);
  EXPECT_EQ(energy_spectrum(frozen(PeriodicField::zero(64)), unit_window, 1, 1.0), 0.0);
  EXPECT_NEAR(energy_spectrum(frozen(nwave(1 << 16)), unit_window, 4, 1.0), 1.0 / (64.0 * pi * pi), 1e-7);
  EXPECT_THROW(energy_spectrum(frozen(sine(64)), unit_window, 40, 2.0), Error);
}

TEST(EnergySpectrum, BandCountsSignedModes) {
  const auto band = spectrum_band(4, 2.0, 1024);
  EXPECT_EQ(band.first, 2);
  EXPECT_EQ(band.second, 8);
}

TEST(SpectrumAudit, FrozenSine) {
  EXPECT_NEAR(spectrum_upper_audit(frozen(sine(1024)), unit_window), pi * pi / 16.0, 1e-5);
  EXPECT_EQ(spectrum_upper_audit(frozen(PeriodicField::zero(64)), unit_window), 0.0);
}

TEST(Classify, SineIsNotInLK) {
  const auto c = classify_snapshot(sine(1024), 0.01, 10.0);
  EXPECT_TRUE(c.condi);
  EXPECT_FALSE(c.condii);
  EXPECT_FALSE(c.in_L_K);
  EXPECT_FALSE(classify_snapshot(PeriodicField::zero(64), 0.01, 10.0).in_L_K);
}

TEST(Classify, CliffProfileIsInOK) {
  const double nu = 1e-3;
  const auto c = classify_snapshot(cliff(16384, nu), nu, 10.0);
  EXPECT_NEAR(c.min_slope, 1.0 - 0.5 / nu, 1e-6 / nu);
  EXPECT_NEAR(c.max_slope, 1.0, 1e-6);
  EXPECT_TRUE(c.condi);
  EXPECT_TRUE(c.condiibis);
  EXPECT_TRUE(c.condiii);
  EXPECT_TRUE(c.in_O_K);
  const auto occ = lk_fraction(frozen(cliff(16384, nu), nu), unit_window, 10.0, nu);
  EXPECT_NEAR(occ.L_K, 1.0, 1e-12);
  EXPECT_NEAR(occ.O_K, 1.0, 1e-12);
  const auto none = lk_fraction(frozen(PeriodicField::zero(64)), unit_window, 10.0, nu);
  EXPECT_EQ(none.L_K, 0.0);
  EXPECT_EQ(none.O_K, 0.0);
}

TEST(Ranges, DefaultsAndValidation) {
  const auto r = default_ranges(10.0, 1e-3);
  EXPECT_DOUBLE_EQ(r.nu0, 1.0 / 600.0);
  EXPECT_DOUBLE_EQ(r.C1, 1.0 / 400.0);
  EXPECT_DOUBLE_EQ(r.C2, 1.0 / 200000.0);
  // C1/C2 = 500 = 5 K^2 is the admissible edge.
  EXPECT_NO_THROW(make_ranges(10.0, r.nu0, r.C1, r.C2, 1e-5));
  EXPECT_THROW(make_ranges(10.0, r.nu0, 2.0 * r.C1, r.C2, 1e-5), Error);
  EXPECT_THROW(make_ranges(10.0, r.nu0, r.C1, 2.0 * r.C2, 1e-5), Error);
  EXPECT_THROW(make_ranges(10.0, r.nu0, r.C1, r.C2, 2.0 * r.nu0), Error);
  const auto s = default_ranges(1.01, 1e-3);
  EXPECT_DOUBLE_EQ(s.J1.hi, s.C1 * 1e-3);
  EXPECT_EQ(s.J2.lo, s.J1.hi);
  EXPECT_EQ(s.J2.hi, s.C2);
  EXPECT_EQ(s.J3.lo, s.C2);
  EXPECT_EQ(s.J3.hi, 1.0);
  EXPECT_FALSE(s.J1.empty() || s.J2.empty() || s.J3.empty());
  EXPECT_EQ(inviscid_ranges(s).J2.lo, 0.0);
}

TEST(OleinikAudit, ColeHopfSamplesSatisfyTheBound) {
  const auto u0 = random_initial_condition(2048, 2);
  const double nu = 0.01;
  const auto potential = make_heat_potential(u0, nu, 2048);
  Trajectory traj;
  traj.config.nu = nu;
  traj.config.u0 = u0;
  for (double t = 0.01; t <= 2.0; t += 0.01) traj.snapshots.push_back({t, evaluate(potential, t, 2048)});
  EXPECT_LE(oleinik_audit(traj, quantity_D(u0), 1.0), 1e-6);
  EXPECT_EQ(oleinik_audit(frozen(PeriodicField::zero(64)), 2.0, 1.0), 0.0);
}

TEST(DiagnosticsProperty, TurbulentRunInvariants) {
  RunConfig c;
  c.nu = 0.01;
  c.n_grid = resolution_floor(c.nu);
  c.u0 = random_initial_condition(c.n_grid, 6);
  c.t_end = 1.0;
  c.snapshot_times = snapshot_schedule(1.0, 128, 0, 0.0);
  const auto traj = integrate(c);
  const double D = quantity_D(c.u0);
  const WindowSpec window{D, 1.0, 1.0, 0.05, 1.0};
  DiagnosticsOptions opt;
  opt.ranges = default_ranges(1.01, c.nu);
  opt.p_list = {1.0, 1.5, 2.0, 3.0, 4.0};
  const auto report = diagnose_snapshots(traj.snapshots, c.nu, window, opt);

  EXPECT_LE(report.positive_part_S1_gap, 1e-10);
  EXPECT_LE(report.spectrum_audit, 1.0 + 1e-6);
  for (const auto& row : report.sp_table) EXPECT_GE(row.value, 0.0);
  for (const auto& row : report.spectrum_table) EXPECT_GE(row.value, 0.0);
  for (const auto& row : report.flatness_table) EXPECT_GE(row.value, 1.0);

  // S_1(ell) <= 2 ell {min(D, 1/t)}.
  std::vector<double> times;
  for (const auto& s : traj.snapshots) times.push_back(s.t);
  const auto w = window_weights(times, window.T1, window.T2);
  double mean_bound = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) mean_bound += w[i] * std::min(D, 1.0 / times[i]);
  }
  std::vector<double> ells;
  for (const auto& row : report.sp_table) {
    if (row.p == 1.0) ells.push_back(row.ell);
  }
  ASSERT_FALSE(ells.empty());
  for (double ell : ells) {
    EXPECT_LE(report.sp(1.0, ell), 2.0 * ell * mean_bound * (1.0 + 1e-3)) << ell;
    double previous = 0.0;
    for (double p : opt.p_list) {
      const double root = std::pow(report.sp(p, ell), 1.0 / p);
      EXPECT_GE(root, previous * (1.0 - 1e-12)) << ell << " p=" << p;
      previous = root;
    }
  }
}
