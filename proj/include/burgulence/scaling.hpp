#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burgulence/diagnostics.hpp"
#include "burgulence/flux.hpp"
#include "burgulence/solver.hpp"

namespace burgulence {

/// gamma(m, p) = max(0, m - 1/p), with 1/inf = 0.
double predicted_gamma(int m, double p);

enum class FitRange { J1, J2 };

struct ZetaPrediction {
  double ell_exponent;
  double nu_exponent;
};

/// J1: (p, 0) for p <= 1, (p, -(p-1)) for p >= 1. J2: (min(p, 1), 0).
ZetaPrediction predicted_zeta(double p, FitRange range);

enum class Verdict { pass, fail, reported, skipped };
const char* to_string(Verdict verdict) noexcept;

struct ScalingFit {
  std::string quantity;
  std::string window;
  std::vector<double> xs;
  std::vector<double> ys;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double slope_stderr = std::numeric_limits<double>::quiet_NaN();
  double predicted = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::reported;
  std::string note;
};

/// Least squares on (log x, log y). Needs >= 4 points spanning >= half a decade
/// (span error) and positive data (domain error).
ScalingFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// verdict = pass iff |slope - predicted| <= tolerance.
void judge(ScalingFit& fit, double predicted, double tolerance);

// ---------------------------------------------------------------------------
// nu sweeps.

/// Length-scale constants. Zero entries take the defaults derived from K.
struct RangeConstants {
  double K = 1.01;
  double nu0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;

  RangeSpec resolve(double nu) const;
};

/// Candidates for the auto-calibrated classification constant.
inline constexpr double k_ladder[] = {2.0, 4.0, 8.0, 16.0, 32.0};

struct SweepConfig {
  FluxModel flux = FluxModel::quadratic();
  std::vector<double> nu_list;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  std::uint64_t seed_base = 0;
  int modes = 4;
  std::size_t n_grid = 0;  ///< 0 means the resolution floor; smaller values are raised to it
  double cfl_safety = 0.4;
  double dealias_fraction = 2.0 / 3.0;
  int uniform_snapshots = 256;
  int log_snapshots = 64;
  RangeConstants ranges;
  double K = 10.0;
  bool auto_K = false;
  double occupancy_floor = 0.1;
  DiagnosticsOptions diagnostics;  ///< ranges and K are filled per run
  std::size_t workers = 1;
};

struct LadderOccupancy {
  double K;
  Occupancy occupancy;
};

struct SweepRun {
  double nu;
  std::uint64_t seed;
  DiagnosticsReport report;
  double energy_residual;
  std::vector<LadderOccupancy> ladder;  ///< occupancy for every K in k_ladder
};

/// Everything needed to integrate one (nu, seed) unit: u0, grid, t_end = T2 estimate
/// and a snapshot schedule dense enough for any window inside [0, t_end].
RunConfig sweep_run_config(const SweepConfig& config, double nu, std::uint64_t seed,
                           double t_end = 0.0);

/// Integrates and diagnoses one unit. The run is extended once if the measured
/// window ends after t_end.
SweepRun run_sweep_unit(const SweepConfig& config, double nu, std::uint64_t seed);

/// Runs every (nu, seed) pair on up to config.workers threads. Results are ordered
/// by (nu_list order, seed order) regardless of completion order. An unstable run
/// aborts the sweep with an instability error naming (nu, seed).
std::vector<SweepRun> sweep_nu(const SweepConfig& config,
                               const std::function<void(const SweepRun&)>& on_done = {});

/// Smallest K in k_ladder whose O_K fraction reaches `floor` on the pilot run (the
/// first run at that nu). `met` is false when no ladder value qualifies; K is then
/// the largest candidate.
struct Calibration {
  double K;
  bool met;
};
Calibration calibrate_K(std::span<const SweepRun> runs, double nu, double floor);

/// Columns nu,seed,quantity,params,value; one row per table entry of every run.
void write_sweep_csv(std::ostream& out, std::span<const SweepRun> runs,
                     std::string_view config_hash);
/// Inverse of write_sweep_csv (values round-trip exactly).
std::vector<SweepRun> read_sweep_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Exponent fits.

struct ExponentOptions {
  double trim_decades = 0.5;
  double norm_tolerance = 0.1;
  double sp_j2_tolerance = 0.15;
  double sp_j1_tolerance = 0.2;
  double sp_j1_nu_tolerance = 0.2;
  double spectrum_tolerance = 0.15;
  double flatness_tolerance = 0.2;
  /// ell / nu for the fixed-ratio fits; <= 0 means C1 / 2.
  double fixed_ratio = 0.0;
  std::vector<double> fixed_ratio_p{2.0, 3.0};
};

/// Geometric mean over seeds of one table entry.
double geometric_mean(std::span<const double> values);

/// Per-nu geometric-mean report (tables only; window and ranges from the first seed).
std::vector<DiagnosticsReport> aggregate_by_nu(std::span<const SweepRun> runs);

/// Fits (a) norms vs nu, (b) S_p vs ell in J2 and J1, (c) compensated S_p at fixed
/// ell/nu vs nu (seeds pooled), (d) E(k) vs k with 1/k in J2, (e) F vs ell in J2.
std::vector<ScalingFit> exponent_report(std::span<const SweepRun> runs,
                                        const ExponentOptions& options = {});

/// Fits (b), (d), (e) on one report; `inviscid` uses J2 = (0, C2] with the lower
/// end at the grid spacing.
std::vector<ScalingFit> range_fits(const DiagnosticsReport& report, const ExponentOptions& options,
                                   bool inviscid = false);

struct InviscidReport {
  DiagnosticsReport report;
  std::vector<ScalingFit> fits;
};

/// Lax-Oleinik snapshots at t_list (covering the window) diagnosed with the
/// inviscid ranges of options.ranges.
InviscidReport inviscid_report(const PeriodicField& u0, const FluxModel& flux,
                               const WindowSpec& window, std::span<const double> t_list,
                               std::size_t n_out, const DiagnosticsOptions& options,
                               const ExponentOptions& exponents = {});

/// Columns quantity,range,slope,stderr,predicted,tolerance,verdict.
void write_fits_csv(std::ostream& out, std::span<const ScalingFit> fits,
                    std::string_view config_hash);
std::vector<ScalingFit> read_fits_csv(std::istream& in);

}  // namespace burgulence
