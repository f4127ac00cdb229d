#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "burgulence/field.hpp"
#include "burgulence/flux.hpp"

namespace burgulence {

/// Smallest power of two >= 16/nu: cliffs are ~nu wide and want ~16 points across.
std::size_t resolution_floor(double nu);

struct RunConfig {
  double nu = 0.0;
  FluxModel flux = FluxModel::quadratic();
  PeriodicField u0 = PeriodicField::zero(16);
  std::size_t n_grid = 0;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  double cfl_safety = 0.4;
  double dealias_fraction = 2.0 / 3.0;
  /// Optional cap on the step (used by accuracy studies); infinity means none.
  double max_dt = infinity;
};

/// Throws a config error naming the offending field.
void validate(const RunConfig& config);

struct StepStats {
  std::size_t step;
  double t;
  double dt;
  double energy;     // |u|^2
  double enstrophy;  // ||u||_1^2 = |u_x|^2
  double max_speed;  // max |f'(u)|
  double max_slope;  // max u_x, one-sided grid difference
};

struct Snapshot {
  double t;
  PeriodicField field;
};

struct Trajectory {
  RunConfig config;
  std::vector<Snapshot> snapshots;
  /// stats[0] describes u0 (dt = 0); stats[i] the state after step i.
  std::vector<StepStats> stats;
};

/// cfl_safety * dx / max|f'(u)|, or dx for a field with max|f'(u)| = 0.
double stable_dt(const PeriodicField& state, const RunConfig& config);

/// One integrating-factor RK4 step of size dt. Throws InstabilityError on
/// non-finite output.
PeriodicField step(const PeriodicField& state, double dt, const RunConfig& config);

/// Runs from u0 to t_end, landing exactly on every snapshot time.
Trajectory integrate(const RunConfig& config);

/// max over snapshot intervals of | |u(t2)|^2 - |u(t1)|^2 + 2 nu int ||u||_1^2 | / |u(t1)|^2.
double energy_balance_residual(const Trajectory& traj);

/// u0 = sum_{j=1..modes} a_j sin(2 pi j x + phi_j), a_j = (0.5 + 0.5 U_j)/j^2, scaled
/// so that max |u0| = 1. The function does not depend on n.
PeriodicField random_initial_condition(std::size_t n, std::uint64_t seed, int modes = 4);

/// Uniform grid of `uniform` intervals on [0, t_end] merged with `logarithmic`
/// log-spaced times in [t_min, t_end]; sorted, duplicates removed, 0 included.
std::vector<double> snapshot_schedule(double t_end, int uniform, int logarithmic, double t_min);

/// Columns step,t,dt,energy,enstrophy,maxslope.
void write_stats_csv(std::ostream& out, const Trajectory& traj, std::string_view config_hash);

}  // namespace burgulence
