#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "burgulence/field.hpp"
#include "burgulence/solver.hpp"

namespace burgulence {

/// D = max(1/|u0|_1, |u0|_{1,inf}). Also checks D^-1 <= |u0|_{m,p} <= D for
/// (m, p) in {0, 1} x {1, inf}; a failed check is an internal error.
double quantity_D(const PeriodicField& u0);

struct WindowSpec {
  double D;
  double sigma;
  double C_tilde;
  double T1;
  double T2;
};

/// T1 = D^-2 / (4 C_tilde), T2 = max(1.5 T1, 2 D / sigma).
WindowSpec averaging_window(double D, double sigma, double C_tilde);

/// 1.5 * sup_t nu ||u(t)||_1^2 over the per-step stats.
double estimate_C_tilde(const Trajectory& traj);

/// Half-open interval (lo, hi].
struct Interval {
  double lo;
  double hi;
  bool contains(double x) const noexcept { return x > lo && x <= hi; }
  bool empty() const noexcept { return !(hi > lo); }
};

/// Length-scale ranges J1 = (0, C1 nu], J2 = (C1 nu, C2], J3 = (C2, 1].
struct RangeSpec {
  double K;
  double nu0;
  double C1;
  double C2;
  double nu;
  Interval J1;
  Interval J2;
  Interval J3;
};

/// nu0 = K^-2/6, C1 = K^-2/4, C2 = K^-4/20.
RangeSpec default_ranges(double K, double nu);
/// Validates C1 <= K^-2/4, 5K^2 <= C1/C2 < 1/nu0 and 0 < nu <= nu0 (config errors).
RangeSpec make_ranges(double K, double nu0, double C1, double C2, double nu);
/// Inviscid variant: no dissipation range, J2 = (0, C2].
RangeSpec inviscid_ranges(const RangeSpec& viscous);

/// Quantity evaluated on one snapshot.
struct Functional {
  std::string name;
  std::function<double(const PeriodicField&)> eval;

  static Functional norm(int m, double p);
  static Functional energy();  // |u|^2
  static Functional custom(std::string name, std::function<double(const PeriodicField&)> eval);
};

/// ((1/(T2-T1)) int_{T1}^{T2} A(t)^alpha dt)^(1/alpha), trapezoid rule on the
/// piecewise-linear interpolant of A^alpha. The samples must bracket [T1, T2]
/// with no gap above (T2 - T1)/64 (coverage error otherwise).
double window_average(std::span<const double> times, std::span<const double> values, double T1,
                      double T2, double alpha = 1.0);

/// Trapezoid weights w_i with sum_i w_i a_i = (1/(T2-T1)) int_{T1}^{T2} a.
std::vector<double> window_weights(std::span<const double> times, double T1, double T2);

double time_average(const Trajectory& traj, const WindowSpec& window, const Functional& functional,
                    double alpha = 1.0);

double structure_function(const Trajectory& traj, const WindowSpec& window, double p, double ell);
double flatness(const Trajectory& traj, const WindowSpec& window, double ell);

/// Signed modes with |n| in [k/M, M k]; returns {first, last} positive index.
std::pair<long, long> spectrum_band(long k, double M, std::size_t n_grid);
/// Mean of |u^(n)|^2 over the band, one snapshot.
double band_energy(const PeriodicField& field, long k, double M);
double energy_spectrum(const Trajectory& traj, const WindowSpec& window, long k, double M = 2.0);

/// max_n {|u^(n)|^2} (2 pi n)^2 / {|u|_{1,1}^2}, Nyquist excluded.
double spectrum_upper_audit(const Trajectory& traj, const WindowSpec& window);

struct SnapshotClass {
  double sup_norm;       // |u|_inf
  double max_slope;      // max u_x
  double min_slope;      // min u_x
  double slope_norm;     // |u|_{1,inf}
  double curvature_norm; // |u|_{2,inf}
  bool condi;
  bool condii;
  bool condiii;
  bool condiibis;
  bool in_L_K;
  bool in_O_K;
};

SnapshotClass classify_snapshot(const PeriodicField& field, double nu, double K);

struct Occupancy {
  double L_K;
  double O_K;
};

/// Time-weighted (trapezoid) fraction of [T1, T2] classified in L_K and O_K.
Occupancy lk_fraction(const Trajectory& traj, const WindowSpec& window, double K, double nu);

/// Relative violations of max u_x <= min(D, 1/(sigma t)), |u|_inf <= min(D, 1/(sigma t))
/// and |u|_{1,1} <= 2 min(D, 1/(sigma t)), maximised over snapshots with t > 0.
struct BoundAudit {
  double oleinik;
  double amplitude;
  double total_variation;
};

double oleinik_audit(const Trajectory& traj, double D, double sigma);
/// Spectral derivatives by default; `differences` switches to one-sided grid
/// differences and the discrete total variation.
BoundAudit bound_audit(std::span<const Snapshot> snapshots, double D, double sigma,
                       bool differences = false);

// ---------------------------------------------------------------------------
// Full report.

struct NormSpec {
  int m;
  double p;
  double alpha;
};

struct DiagnosticsOptions {
  double K = 10.0;             ///< classification constant for L_K / O_K
  double M = 2.0;              ///< spectrum layer width
  RangeSpec ranges{};          ///< must be filled by the caller (see make_ranges)
  std::vector<NormSpec> norms; ///< empty: {0,1,2} x {1,2,inf} x {1,2}
  std::vector<double> p_list{0.5, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> ells;    ///< empty: ell_grid(n, ell_per_decade)
  std::vector<long> ks;        ///< empty: k_grid(n, M, k_per_decade)
  int ell_per_decade = 10;
  int k_per_decade = 10;
  double C_tilde = 0.0;        ///< <= 0: estimate from the trajectory
};

/// Log-spaced grid multiples j/n in [1/n, 1/2], `per_decade` points per decade.
std::vector<double> ell_grid(std::size_t n, int per_decade);
/// Log-spaced integers in [1, floor(n/(3M))].
std::vector<long> k_grid(std::size_t n, double M, int per_decade);

struct NormRow {
  int m;
  double p;
  double alpha;
  double value;
};
struct SpRow {
  double p;
  double ell;
  double value;
};
struct SpectrumRow {
  long k;
  double M;
  double value;
};
struct FlatnessRow {
  double ell;
  double value;
};

struct DiagnosticsReport {
  WindowSpec window;
  RangeSpec ranges;
  double nu;
  std::size_t n_grid;
  std::vector<NormRow> norm_table;
  std::vector<SpRow> sp_table;
  std::vector<SpectrumRow> spectrum_table;
  std::vector<FlatnessRow> flatness_table;
  double positive_part_S1_gap;  ///< max_ell |S_1 - 2 {positive part}| / S_1
  Occupancy occupancy;
  double K;
  BoundAudit audit;
  double spectrum_audit;
  std::size_t snapshots_in_window;

  double norm(int m, double p, double alpha) const;
  double sp(double p, double ell) const;
};

/// Full report for a viscous run; the window comes from D(u0), sigma and C_tilde.
DiagnosticsReport diagnose(const Trajectory& traj, const DiagnosticsOptions& options);

/// Same tables for an arbitrary snapshot sequence and a given window. With
/// `inviscid` the pointwise audits use grid differences (the fields carry shocks).
DiagnosticsReport diagnose_snapshots(std::span<const Snapshot> snapshots, double nu,
                                     const WindowSpec& window, const DiagnosticsOptions& options,
                                     bool inviscid = false);

/// JSON document plus norms.csv, sp.csv, spectrum.csv, flatness.csv, audit.csv.
void write_report_json(std::ostream& out, const DiagnosticsReport& report);
void write_report_csvs(const std::string& directory, const DiagnosticsReport& report,
                       std::string_view config_hash);

}  // namespace burgulence
