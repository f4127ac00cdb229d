#include "burgulence/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"

namespace burgulence {

double quantity_D(const PeriodicField& u0) {
  require(u0.max_abs() > 0.0, ErrorKind::excluded_case, "D is undefined for u0 == 0");
  const auto d1 = derivative(u0, 1);
  const double l1 = norm_wmp(u0, 0, 1.0);
  const double sup = u0.max_abs();
  const double w11 = norm_wmp(d1, 0, 1.0);
  const double w1inf = d1.max_abs();
  const double D = std::max(1.0 / l1, w1inf);
  const double slack = 1e-6;
  for (double v : {l1, sup, w11, w1inf}) {
    if (v < (1.0 - slack) / D || v > (1.0 + slack) * D) {
      std::ostringstream msg;
      msg << "norm " << v << " of u0 escapes [1/D, D] with D = " << D << " (under-resolved u0?)";
      fail(ErrorKind::internal, msg.str());
    }
  }
  return D;
}

WindowSpec averaging_window(double D, double sigma, double C_tilde) {
  require(D > 1.0 && std::isfinite(D), ErrorKind::domain, "averaging window needs D > 1");
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::domain, "averaging window needs sigma > 0");
  require(C_tilde > 0.0 && std::isfinite(C_tilde), ErrorKind::domain,
          "averaging window needs C_tilde > 0");
  const double T1 = 0.25 / (D * D) / C_tilde;
  const double T2 = std::max(1.5 * T1, 2.0 * D / sigma);
  return {D, sigma, C_tilde, T1, T2};
}

double estimate_C_tilde(const Trajectory& traj) {
  double sup = 0.0;
  for (const auto& s : traj.stats) sup = std::max(sup, s.enstrophy);
  return 1.5 * traj.config.nu * sup;
}

namespace {

RangeSpec build_ranges(double K, double nu0, double C1, double C2, double nu) {
  return {K, nu0, C1, C2, nu, {0.0, C1 * nu}, {C1 * nu, C2}, {C2, 1.0}};
}

}  // namespace

RangeSpec default_ranges(double K, double nu) {
  require(K > 1.0 && std::isfinite(K), ErrorKind::config, "K: must be > 1");
  const double k2 = 1.0 / (K * K);
  return make_ranges(K, k2 / 6.0, k2 / 4.0, k2 * k2 / 20.0, nu);
}

RangeSpec make_ranges(double K, double nu0, double C1, double C2, double nu) {
  auto reject = [](const std::string& msg) { fail(ErrorKind::config, msg); };
  if (!(K > 1.0) || !std::isfinite(K)) reject("K: must be > 1");
  if (!(nu0 > 0.0 && C1 > 0.0 && C2 > 0.0)) reject("nu0, C1, C2: must be positive");
  // A relative slack of a few ulps lets the defaults sit exactly on the boundary.
  const double tight = 1e-12;
  if (C1 > 0.25 / (K * K) * (1.0 + tight)) reject("C1: violates C1 <= K^-2/4");
  const double ratio = C1 / C2;
  if (ratio < 5.0 * K * K * (1.0 - tight)) reject("C1/C2: violates 5 K^2 <= C1/C2");
  if (!(ratio < 1.0 / nu0)) reject("C1/C2: violates C1/C2 < 1/nu0");
  if (!(C2 < 1.0)) reject("C2: must be < 1");
  if (!(nu > 0.0)) reject("nu: must be positive");
  if (nu > nu0) {
    std::ostringstream msg;
    msg << "nu: " << nu << " exceeds nu0 = " << nu0;
    reject(msg.str());
  }
  return build_ranges(K, nu0, C1, C2, nu);
}

RangeSpec inviscid_ranges(const RangeSpec& viscous) {
  RangeSpec r = viscous;
  r.nu = 0.0;
  r.J1 = {0.0, 0.0};
  r.J2 = {0.0, r.C2};
  r.J3 = {r.C2, 1.0};
  return r;
}

Functional Functional::norm(int m, double p) {
  std::ostringstream name;
  name << "norm_w" << m << "_" << p;
  return {name.str(), [m, p](const PeriodicField& u) { return norm_wmp(u, m, p); }};
}

Functional Functional::energy() {
  return {"energy", [](const PeriodicField& u) {
            const double l2 = norm_wmp(u, 0, 2.0);
            return l2 * l2;
          }};
}

Functional Functional::custom(std::string name, std::function<double(const PeriodicField&)> eval) {
  return {std::move(name), std::move(eval)};
}

std::vector<double> window_weights(std::span<const double> times, double T1, double T2) {
  require(T2 > T1, ErrorKind::domain, "averaging window needs T2 > T1");
  const std::size_t n = times.size();
  const double span = T2 - T1;
  const double tol = 1e-9 * span;
  if (n < 2 || times.front() > T1 + tol || times.back() < T2 - tol) {
    std::ostringstream msg;
    msg << "snapshots do not cover the window [" << T1 << ", " << T2 << "]";
    fail(ErrorKind::coverage, msg.str());
  }
  std::vector<double> w(n, 0.0);
  const double max_gap = span / 64.0 * (1.0 + 1e-9);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    require(t1 > t0, ErrorKind::domain, "snapshot times must be strictly increasing");
    const double a = std::max(t0, T1);
    const double b = std::min(t1, T2);
    if (!(b > a)) continue;
    if (t1 - t0 > max_gap) {
      std::ostringstream msg;
      msg << "snapshot gap " << (t1 - t0) << " at t = " << t0 << " exceeds (T2-T1)/64 = "
          << span / 64.0;
      fail(ErrorKind::coverage, msg.str());
    }
    const double h = t1 - t0;
    const double ta = (a - t0) / h;
    const double tb = (b - t0) / h;
    const double half = 0.5 * (b - a) / span;
    w[i] += half * ((1.0 - ta) + (1.0 - tb));
    w[i + 1] += half * (ta + tb);
  }
  return w;
}

double window_average(std::span<const double> times, std::span<const double> values, double T1,
                      double T2, double alpha) {
  require(alpha > 0.0, ErrorKind::domain, "time average needs alpha > 0");
  require(times.size() == values.size(), ErrorKind::internal, "times and values differ in length");
  const auto w = window_weights(times, T1, T2);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) acc += w[i] * (alpha == 1.0 ? values[i] : std::pow(values[i], alpha));
  }
  return alpha == 1.0 ? acc : std::pow(acc, 1.0 / alpha);
}

namespace {

std::vector<double> snapshot_times(std::span<const Snapshot> snaps) {
  std::vector<double> t;
  t.reserve(snaps.size());
  for (const auto& s : snaps) t.push_back(s.t);
  return t;
}

/// Applies fn to every snapshot carrying nonzero window weight; returns sum w_i fn(u_i).
template <class Fn>
double weighted_sum(std::span<const Snapshot> snaps, const std::vector<double>& w, Fn&& fn) {
  double acc = 0.0;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (w[i] != 0.0) acc += w[i] * fn(snaps[i].field);
  }
  return acc;
}

}  // namespace

double time_average(const Trajectory& traj, const WindowSpec& window, const Functional& functional,
                    double alpha) {
  require(alpha > 0.0, ErrorKind::domain, "time average needs alpha > 0");
  const auto w = window_weights(snapshot_times(traj.snapshots), window.T1, window.T2);
  const double acc = weighted_sum(traj.snapshots, w, [&](const PeriodicField& u) {
    const double a = functional.eval(u);
    return alpha == 1.0 ? a : std::pow(a, alpha);
  });
  return alpha == 1.0 ? acc : std::pow(acc, 1.0 / alpha);
}

double structure_function(const Trajectory& traj, const WindowSpec& window, double p, double ell) {
  require(p >= 0.0, ErrorKind::domain, "structure function needs p >= 0");
  const auto w = window_weights(snapshot_times(traj.snapshots), window.T1, window.T2);
  return weighted_sum(traj.snapshots, w,
                      [&](const PeriodicField& u) { return increment_moment(u, ell, p); });
}

double flatness(const Trajectory& traj, const WindowSpec& window, double ell) {
  const double s2 = structure_function(traj, window, 2.0, ell);
  const double s4 = structure_function(traj, window, 4.0, ell);
  require(s2 > 0.0, ErrorKind::undefined, "flatness undefined: S_2 vanishes");
  return s4 / (s2 * s2);
}

std::pair<long, long> spectrum_band(long k, double M, std::size_t n_grid) {
  require(k >= 1, ErrorKind::domain, "spectrum needs k >= 1");
  require(M >= 1.0 && std::isfinite(M), ErrorKind::domain, "spectrum needs M >= 1");
  const double kd = static_cast<double>(k);
  if (M * kd > static_cast<double>(n_grid) / 3.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "spectrum band M k = " << M * kd << " leaves the dealiased range n/3 = "
        << static_cast<double>(n_grid) / 3.0;
    fail(ErrorKind::domain, msg.str());
  }
  const long lo = std::max(1L, static_cast<long>(std::ceil(kd / M - 1e-9)));
  const long hi = static_cast<long>(std::floor(kd * M + 1e-9));
  require(lo <= hi, ErrorKind::domain, "empty spectrum band");
  return {lo, hi};
}

double band_energy(const PeriodicField& field, long k, double M) {
  const auto [lo, hi] = spectrum_band(k, M, field.size());
  auto c = field.coefficients();
  double acc = 0.0;
  // |u^(-n)| = |u^(n)|, so the signed average equals the average over n > 0.
  for (long n = lo; n <= hi; ++n) acc += std::norm(c[static_cast<std::size_t>(n)]);
  return acc / static_cast<double>(hi - lo + 1);
}

double energy_spectrum(const Trajectory& traj, const WindowSpec& window, long k, double M) {
  const auto w = window_weights(snapshot_times(traj.snapshots), window.T1, window.T2);
  return weighted_sum(traj.snapshots, w,
                      [&](const PeriodicField& u) { return band_energy(u, k, M); });
}

namespace {

struct SpectrumAudit {
  std::vector<double> modes;  // sum w |u^(n)|^2, n = 0..n/2
  double tv_squared = 0.0;    // sum w |u|_{1,1}^2

  void add(const PeriodicField& u, const PeriodicField& du, double w) {
    auto c = u.coefficients();
    if (modes.empty()) modes.assign(c.size(), 0.0);
    for (std::size_t n = 1; n < c.size(); ++n) modes[n] += w * std::norm(c[n]);
    const double tv = norm_wmp(du, 0, 1.0);
    tv_squared += w * tv * tv;
  }

  double ratio() const {
    if (!(tv_squared > 0.0)) return 0.0;
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 < modes.size(); ++n) {
      const double kk = 2.0 * pi * static_cast<double>(n);
      worst = std::max(worst, modes[n] * kk * kk / tv_squared);
    }
    return worst;
  }
};

}  // namespace

double spectrum_upper_audit(const Trajectory& traj, const WindowSpec& window) {
  const auto w = window_weights(snapshot_times(traj.snapshots), window.T1, window.T2);
  SpectrumAudit audit;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto& u = traj.snapshots[i].field;
    audit.add(u, derivative(u, 1), w[i]);
  }
  return audit.ratio();
}

SnapshotClass classify_snapshot(const PeriodicField& field, double nu, double K) {
  require(nu > 0.0 && K > 0.0, ErrorKind::domain, "classification needs nu > 0 and K > 0");
  const auto d1 = derivative(field, 1);
  const auto d2 = derivative(field, 2);
  SnapshotClass c{};
  c.sup_norm = field.max_abs();
  auto s = d1.samples();
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  c.max_slope = *hi;
  c.min_slope = *lo;
  c.slope_norm = std::max(std::abs(*lo), std::abs(*hi));
  c.curvature_norm = d2.max_abs();
  const double inv = 1.0 / K;
  c.condi = inv <= c.sup_norm && c.sup_norm <= c.max_slope && c.max_slope <= K;
  c.condii = inv / nu <= c.slope_norm && c.slope_norm <= K / nu;
  c.condiii = c.curvature_norm <= K / (nu * nu);
  c.condiibis = inv / nu <= -c.min_slope && -c.min_slope <= K / nu;
  c.in_L_K = c.condi && c.condii && c.condiii;
  c.in_O_K = c.condi && c.condiibis && c.condiii;
  return c;
}

Occupancy lk_fraction(const Trajectory& traj, const WindowSpec& window, double K, double nu) {
  const auto w = window_weights(snapshot_times(traj.snapshots), window.T1, window.T2);
  Occupancy occ{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto c = classify_snapshot(traj.snapshots[i].field, nu, K);
    if (c.in_L_K) occ.L_K += w[i];
    if (c.in_O_K) occ.O_K += w[i];
  }
  return occ;
}

namespace {

double bound_at(double t, double D, double sigma) { return std::min(D, 1.0 / (sigma * t)); }

struct PointwiseNorms {
  double max_slope;
  double sup;
  double tv;
};

PointwiseNorms pointwise_norms(const PeriodicField& u, bool differences) {
  if (!differences) {
    const auto d1 = derivative(u, 1);
    auto s = d1.samples();
    return {*std::max_element(s.begin(), s.end()), u.max_abs(), norm_wmp(d1, 0, 1.0)};
  }
  auto v = u.samples();
  const std::size_t n = v.size();
  double slope = -infinity;
  double tv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double jump = v[j + 1 == n ? 0 : j + 1] - v[j];
    slope = std::max(slope, jump * static_cast<double>(n));
    tv += std::abs(jump);
  }
  return {slope, u.max_abs(), tv};
}

}  // namespace

BoundAudit bound_audit(std::span<const Snapshot> snapshots, double D, double sigma,
                       bool differences) {
  BoundAudit audit{0.0, 0.0, 0.0};
  for (const auto& s : snapshots) {
    if (!(s.t > 0.0)) continue;
    const double b = bound_at(s.t, D, sigma);
    const auto norms = pointwise_norms(s.field, differences);
    audit.oleinik = std::max(audit.oleinik, std::max(norms.max_slope - b, 0.0) / b);
    audit.amplitude = std::max(audit.amplitude, std::max(norms.sup - b, 0.0) / b);
    audit.total_variation =
        std::max(audit.total_variation, std::max(norms.tv - 2.0 * b, 0.0) / (2.0 * b));
  }
  return audit;
}

double oleinik_audit(const Trajectory& traj, double D, double sigma) {
  return bound_audit(traj.snapshots, D, sigma).oleinik;
}

std::vector<double> ell_grid(std::size_t n, int per_decade) {
  require(per_decade >= 1, ErrorKind::domain, "ell grid needs at least one point per decade");
  const double lo = std::log10(1.0 / static_cast<double>(n));
  const double hi = std::log10(0.5);
  const int count = static_cast<int>(std::ceil((hi - lo) * per_decade));
  std::set<double> ells;
  for (int i = 0; i <= count; ++i) {
    ells.insert(snap_to_grid(std::pow(10.0, lo + (hi - lo) * i / count), n));
  }
  return {ells.begin(), ells.end()};
}

std::vector<long> k_grid(std::size_t n, double M, int per_decade) {
  require(per_decade >= 1, ErrorKind::domain, "k grid needs at least one point per decade");
  const long top = static_cast<long>(std::floor(static_cast<double>(n) / (3.0 * M) + 1e-9));
  require(top >= 1, ErrorKind::domain, "grid too small for the spectrum band");
  const double hi = std::log10(static_cast<double>(top));
  const int count = std::max(1, static_cast<int>(std::ceil(hi * per_decade)));
  std::set<long> ks;
  for (int i = 0; i <= count; ++i) {
    ks.insert(std::clamp(std::lround(std::pow(10.0, hi * i / count)), 1L, top));
  }
  return {ks.begin(), ks.end()};
}

double DiagnosticsReport::norm(int m, double p, double alpha) const {
  for (const auto& r : norm_table) {
    if (r.m == m && r.p == p && r.alpha == alpha) return r.value;
  }
  fail(ErrorKind::domain, "norm not present in report");
}

double DiagnosticsReport::sp(double p, double ell) const {
  for (const auto& r : sp_table) {
    if (r.p == p && std::abs(r.ell - ell) <= 1e-12 * ell) return r.value;
  }
  fail(ErrorKind::domain, "structure function not present in report");
}

namespace {

std::vector<NormSpec> default_norms() {
  std::vector<NormSpec> out;
  for (int m : {0, 1, 2}) {
    for (double p : {1.0, 2.0, infinity}) {
      for (double alpha : {1.0, 2.0}) out.push_back({m, p, alpha});
    }
  }
  return out;
}

}  // namespace

DiagnosticsReport diagnose_snapshots(std::span<const Snapshot> snapshots, double nu,
                                     const WindowSpec& window, const DiagnosticsOptions& options,
                                     bool inviscid) {
  require(!snapshots.empty(), ErrorKind::coverage, "no snapshots to diagnose");
  const std::size_t n = snapshots.front().field.size();
  for (const auto& s : snapshots) {
    require(s.field.size() == n, ErrorKind::domain, "snapshots must share one grid");
  }
  const auto w = window_weights(snapshot_times(snapshots), window.T1, window.T2);

  const auto norms = options.norms.empty() ? default_norms() : options.norms;
  const auto ells = options.ells.empty() ? ell_grid(n, options.ell_per_decade) : options.ells;
  const auto ks = options.ks.empty() ? k_grid(n, options.M, options.k_per_decade) : options.ks;
  for (double ell : ells) grid_shift(ell, n);
  std::vector<double> ps = options.p_list;
  for (double p : {1.0, 2.0, 4.0}) {
    if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());

  std::vector<double> norm_acc(norms.size(), 0.0);
  std::vector<double> sp_acc(ps.size() * ells.size(), 0.0);
  std::vector<double> pos_acc(ells.size(), 0.0);
  std::vector<double> spec_acc(ks.size(), 0.0);
  SpectrumAudit spectrum;
  Occupancy occ{0.0, 0.0};
  std::size_t in_window = 0;
  std::vector<double> increments(n);

  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (w[i] == 0.0) continue;
    ++in_window;
    const PeriodicField& u = snapshots[i].field;
    const PeriodicField d1 = derivative(u, 1);
    const PeriodicField d2 = derivative(u, 2);
    const PeriodicField* by_order[] = {&u, &d1, &d2};

    std::map<std::pair<int, double>, double> cache;
    for (std::size_t r = 0; r < norms.size(); ++r) {
      const auto& spec = norms[r];
      require(spec.m >= 0 && spec.m <= 2, ErrorKind::domain, "report norms need m in 0..2");
      auto key = std::make_pair(spec.m, spec.p);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, norm_wmp(*by_order[spec.m], 0, spec.p)).first;
      norm_acc[r] += w[i] * (spec.alpha == 1.0 ? it->second : std::pow(it->second, spec.alpha));
    }

    auto v = u.samples();
    for (std::size_t e = 0; e < ells.size(); ++e) {
      const std::size_t shift = grid_shift(ells[e], n);
      double positive = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t js = j + shift;
        if (js >= n) js -= n;
        increments[j] = v[js] - v[j];
        positive += std::max(increments[j], 0.0);
      }
      pos_acc[e] += w[i] * positive / static_cast<double>(n);
      for (std::size_t q = 0; q < ps.size(); ++q) {
        double acc = 0.0;
        for (double d : increments) acc += abs_pow(d, ps[q]);
        sp_acc[q * ells.size() + e] += w[i] * acc / static_cast<double>(n);
      }
    }

    for (std::size_t r = 0; r < ks.size(); ++r) spec_acc[r] += w[i] * band_energy(u, ks[r], options.M);
    spectrum.add(u, d1, w[i]);

    if (nu > 0.0) {
      const auto c = classify_snapshot(u, nu, options.K);
      if (c.in_L_K) occ.L_K += w[i];
      if (c.in_O_K) occ.O_K += w[i];
    }
  }

  DiagnosticsReport report{};
  report.window = window;
  report.ranges = options.ranges;
  report.nu = nu;
  report.n_grid = n;
  report.K = options.K;
  report.occupancy = occ;
  report.snapshots_in_window = in_window;
  for (std::size_t r = 0; r < norms.size(); ++r) {
    const auto& spec = norms[r];
    const double value = spec.alpha == 1.0 ? norm_acc[r] : std::pow(norm_acc[r], 1.0 / spec.alpha);
    report.norm_table.push_back({spec.m, spec.p, spec.alpha, value});
  }
  for (double p : options.p_list) {
    const std::size_t q = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), p) - ps.begin());
    for (std::size_t e = 0; e < ells.size(); ++e) {
      report.sp_table.push_back({p, ells[e], sp_acc[q * ells.size() + e]});
    }
  }
  const std::size_t q1 = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), 1.0) - ps.begin());
  const std::size_t q2 = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), 2.0) - ps.begin());
  const std::size_t q4 = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), 4.0) - ps.begin());
  report.positive_part_S1_gap = 0.0;
  for (std::size_t e = 0; e < ells.size(); ++e) {
    const double s1 = sp_acc[q1 * ells.size() + e];
    if (s1 > 0.0) {
      report.positive_part_S1_gap =
          std::max(report.positive_part_S1_gap, std::abs(s1 - 2.0 * pos_acc[e]) / s1);
    }
    const double s2 = sp_acc[q2 * ells.size() + e];
    const double s4 = sp_acc[q4 * ells.size() + e];
    if (s2 > 0.0) report.flatness_table.push_back({ells[e], s4 / (s2 * s2)});
  }
  for (std::size_t r = 0; r < ks.size(); ++r) report.spectrum_table.push_back({ks[r], options.M, spec_acc[r]});
  report.spectrum_audit = spectrum.ratio();
  report.audit = bound_audit(snapshots, window.D, window.sigma, inviscid);
  return report;
}

DiagnosticsReport diagnose(const Trajectory& traj, const DiagnosticsOptions& options) {
  const double D = quantity_D(traj.config.u0);
  const double C_tilde = options.C_tilde > 0.0 ? options.C_tilde : estimate_C_tilde(traj);
  const auto window = averaging_window(D, traj.config.flux.sigma(), C_tilde);
  return diagnose_snapshots(traj.snapshots, traj.config.nu, window, options);
}

namespace {

nlohmann::json exponent(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}


void write_interval(nlohmann::json& j, const char* key, const Interval& iv) {
  j[key] = {iv.lo, iv.hi};
}

}  // namespace

void write_report_json(std::ostream& out, const DiagnosticsReport& r) {
  nlohmann::json j;
  j["window"] = {{"D", r.window.D},
                 {"sigma", r.window.sigma},
                 {"C_tilde", r.window.C_tilde},
                 {"T1", r.window.T1},
                 {"T2", r.window.T2}};
  nlohmann::json ranges = {{"K", r.ranges.K}, {"nu0", r.ranges.nu0}, {"C1", r.ranges.C1}, {"C2", r.ranges.C2}};
  write_interval(ranges, "J1", r.ranges.J1);
  write_interval(ranges, "J2", r.ranges.J2);
  write_interval(ranges, "J3", r.ranges.J3);
  j["ranges"] = ranges;
  j["nu"] = r.nu;
  j["n_grid"] = r.n_grid;
  j["snapshots_in_window"] = r.snapshots_in_window;
  for (const auto& row : r.norm_table) {
    j["norms"].push_back({{"m", row.m}, {"p", exponent(row.p)}, {"alpha", row.alpha}, {"value", row.value}});
  }
  for (const auto& row : r.sp_table) {
    j["structure_functions"].push_back({{"p", row.p}, {"ell", row.ell}, {"value", row.value}});
  }
  for (const auto& row : r.spectrum_table) {
    j["spectrum"].push_back({{"k", row.k}, {"M", row.M}, {"value", row.value}});
  }
  for (const auto& row : r.flatness_table) {
    j["flatness"].push_back({{"ell", row.ell}, {"value", row.value}});
  }
  j["occupancy"] = {{"K", r.K}, {"L_K", r.occupancy.L_K}, {"O_K", r.occupancy.O_K}};
  j["audit"] = {{"oleinik", r.audit.oleinik},
                {"amplitude", r.audit.amplitude},
                {"total_variation", r.audit.total_variation},
                {"spectrum_upper", r.spectrum_audit},
                {"S1_positive_part_gap", r.positive_part_S1_gap}};
  out << j.dump(2) << '\n';
}

void write_report_csvs(const std::string& directory, const DiagnosticsReport& r,
                       std::string_view config_hash) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto open = [&](const char* name, const char* columns) {
    std::ofstream f(fs::path(directory) / name);
    require(static_cast<bool>(f), ErrorKind::io, std::string("cannot write ") + name);
    f << provenance_line(config_hash) << '\n' << columns << '\n';
    return f;
  };
  {
    auto f = open("norms.csv", "m,p,alpha,value");
    for (const auto& row : r.norm_table) {
      f << row.m << ',' << csv_number(row.p) << ',' << csv_number(row.alpha) << ',' << csv_number(row.value) << '\n';
    }
  }
  {
    auto f = open("sp.csv", "p,ell,value");
    for (const auto& row : r.sp_table) {
      f << csv_number(row.p) << ',' << csv_number(row.ell) << ',' << csv_number(row.value) << '\n';
    }
  }
  {
    auto f = open("spectrum.csv", "k,M,value");
    for (const auto& row : r.spectrum_table) {
      f << row.k << ',' << csv_number(row.M) << ',' << csv_number(row.value) << '\n';
    }
  }
  {
    auto f = open("flatness.csv", "ell,value");
    for (const auto& row : r.flatness_table) {
      f << csv_number(row.ell) << ',' << csv_number(row.value) << '\n';
    }
  }
  {
    auto f = open("audit.csv", "name,value");
    f << "oleinik," << csv_number(r.audit.oleinik) << '\n'
      << "amplitude," << csv_number(r.audit.amplitude) << '\n'
      << "total_variation," << csv_number(r.audit.total_variation) << '\n'
      << "spectrum_upper," << csv_number(r.spectrum_audit) << '\n'
      << "S1_positive_part_gap," << csv_number(r.positive_part_S1_gap) << '\n'
      << "L_K_fraction," << csv_number(r.occupancy.L_K) << '\n'
      << "O_K_fraction," << csv_number(r.occupancy.O_K) << '\n'
      << "T1," << csv_number(r.window.T1) << '\n'
      << "T2," << csv_number(r.window.T2) << '\n'
      << "C_tilde," << csv_number(r.window.C_tilde) << '\n'
      << "D," << csv_number(r.window.D) << '\n';
  }
}

}  // namespace burgulence
