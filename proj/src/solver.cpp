#include "burgulence/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"

namespace burgulence {

std::size_t resolution_floor(double nu) {
  require(nu > 0.0 && std::isfinite(nu), ErrorKind::domain, "viscosity must be positive");
  const double target = 16.0 / nu;
  std::size_t n = 16;
  while (static_cast<double>(n) < target) n *= 2;
  return n;
}

void validate(const RunConfig& c) {
  auto reject = [](const std::string& msg) { fail(ErrorKind::config, msg); };
  if (!(c.nu > 0.0) || !std::isfinite(c.nu)) reject("nu: must be a finite positive number");
  if (c.n_grid < 16 || !is_power_of_two(c.n_grid)) reject("n_grid: must be a power of two >= 16");
  if (c.n_grid < resolution_floor(c.nu)) {
    std::ostringstream msg;
    msg << "n_grid: " << c.n_grid << " is below the resolution floor " << resolution_floor(c.nu)
        << " for nu = " << c.nu;
    reject(msg.str());
  }
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) reject("t_end: must be finite and >= 0");
  if (!(c.cfl_safety > 0.0) || !std::isfinite(c.cfl_safety)) reject("cfl_safety: must be > 0");
  if (!(c.dealias_fraction > 0.0 && c.dealias_fraction <= 1.0)) {
    reject("dealias_fraction: must lie in (0, 1]");
  }
  if (!(c.max_dt > 0.0)) reject("max_dt: must be > 0");
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    const double t = c.snapshot_times[i];
    if (!(t >= 0.0 && t <= c.t_end)) reject("snapshot_times: every time must lie in [0, t_end]");
    if (i > 0 && !(t > c.snapshot_times[i - 1])) {
      reject("snapshot_times: must be strictly increasing");
    }
  }
}

namespace {

struct Factors {
  std::vector<double> half;  // exp(-4 pi^2 k^2 nu dt/2)
  std::vector<double> full;  // its square
};

/// Spectral state of one integration plus the scratch it needs.
class Stepper {
 public:
  Stepper(const RunConfig& config)
      : flux_(config.flux),
        nu_(config.nu),
        n_(config.n_grid),
        modes_(n_ / 2 + 1),
        cutoff_(static_cast<std::size_t>(std::floor(config.dealias_fraction * static_cast<double>(n_ / 2)))),
        fft_(n_),
        grid_(n_),
        work_(n_),
        k1_(modes_), k2_(modes_), k3_(modes_), k4_(modes_), tmp_(modes_) {}

  /// Samples of c into grid_.
  void to_grid(std::span<const Complex> c) { fft_.inverse(c, grid_); }
  std::span<const double> grid() const { return grid_; }

  /// out = -(f(u))_x, dealiased, with u given on the grid.
  void nonlinear_from_grid(std::span<const double> u, std::span<Complex> out) {
    apply_flux(u, work_);
    fft_.forward(work_, out);
    differentiate(out);
  }

  void nonlinear(std::span<const Complex> c, std::span<Complex> out) {
    fft_.inverse(c, work_);
    apply_flux(work_, work_);
    fft_.forward(work_, out);
    differentiate(out);
  }

  const Factors& factors(double dt) {
    auto it = cache_.find(dt);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 64) cache_.clear();
    Factors f;
    f.half.resize(modes_);
    f.full.resize(modes_);
    for (std::size_t k = 0; k < modes_; ++k) {
      const double kk = 2.0 * pi * static_cast<double>(k);
      f.half[k] = std::exp(-kk * kk * nu_ * 0.5 * dt);
      f.full[k] = f.half[k] * f.half[k];
    }
    return cache_.emplace(dt, std::move(f)).first->second;
  }

  /// Lawson IF-RK4. k1 must already hold N(c). Updates c in place.
  void advance(std::vector<Complex>& c, double dt) {
    const Factors& f = factors(dt);
    const auto& e = f.half;
    const auto& e2 = f.full;
    const double h = 0.5 * dt;
    for (std::size_t k = 0; k < modes_; ++k) tmp_[k] = e[k] * (c[k] + h * k1_[k]);
    nonlinear(tmp_, k2_);
    for (std::size_t k = 0; k < modes_; ++k) tmp_[k] = e[k] * c[k] + h * k2_[k];
    nonlinear(tmp_, k3_);
    for (std::size_t k = 0; k < modes_; ++k) tmp_[k] = e2[k] * c[k] + dt * e[k] * k3_[k];
    nonlinear(tmp_, k4_);
    const double w = dt / 6.0;
    for (std::size_t k = 0; k < modes_; ++k) {
      c[k] = e2[k] * c[k] + w * (e2[k] * k1_[k] + 2.0 * e[k] * (k2_[k] + k3_[k]) + k4_[k]);
    }
    c[0] = 0.0;
    c[n_ / 2] = c[n_ / 2].real();
  }

  std::vector<Complex>& k1() { return k1_; }

 private:
  // The family switch sits outside the loop so the loop body inlines.
  void apply_flux(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = u.size();
    switch (flux_.family()) {
      case FluxFamily::quadratic:
        for (std::size_t j = 0; j < n; ++j) out[j] = 0.5 * u[j] * u[j];
        break;
      case FluxFamily::quartic: {
        const double eps = flux_.epsilon();
        for (std::size_t j = 0; j < n; ++j) {
          const double v2 = u[j] * u[j];
          out[j] = v2 * (0.5 + eps * v2);
        }
        break;
      }
      case FluxFamily::cosh:
        for (std::size_t j = 0; j < n; ++j) out[j] = std::cosh(u[j]) - 1.0;
        break;
    }
  }

  /// Multiplies by -2 pi i k and zeroes the mean and every mode above the cutoff.
  void differentiate(std::span<Complex> out) const {
    out[0] = 0.0;
    for (std::size_t k = 1; k < modes_; ++k) {
      if (k > cutoff_) {
        out[k] = 0.0;
      } else {
        const double kk = 2.0 * pi * static_cast<double>(k);
        out[k] = Complex(kk * out[k].imag(), -kk * out[k].real());
      }
    }
  }

  const FluxModel& flux_;
  double nu_;
  std::size_t n_;
  std::size_t modes_;
  std::size_t cutoff_;
  RealFft fft_;
  RealBuffer grid_;
  RealBuffer work_;
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
  std::map<double, Factors> cache_;
};

// f' is increasing, so max |f'(u)| is attained at the extreme values of u.
double max_speed_of(std::span<const double> u, const FluxModel& flux) {
  if (u.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return std::max(std::abs(flux.df(*lo)), std::abs(flux.df(*hi)));
}

bool all_finite(std::span<const double> u) {
  for (double v : u) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

StepStats measure(std::size_t step_index, double t, double dt, std::span<const Complex> c,
                  std::span<const double> u, const FluxModel& flux) {
  const std::size_t n = u.size();
  double energy = 0.0;
  double enstrophy = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double weight = (k == n / 2) ? 1.0 : 2.0;
    const double e = weight * std::norm(c[k]);
    const double kk = 2.0 * pi * static_cast<double>(k);
    energy += e;
    enstrophy += e * kk * kk;
  }
  double slope = -infinity;
  for (std::size_t j = 0; j < n; ++j) {
    const double next = u[j + 1 == n ? 0 : j + 1];
    slope = std::max(slope, (next - u[j]) * static_cast<double>(n));
  }
  return {step_index, t, dt, energy, enstrophy, max_speed_of(u, flux), slope};
}

constexpr double enstrophy_change_per_step = 0.02;

/// Largest dt = dx 2^(-j/8) not above `limit`, so only a few integrating factors are live.
double ladder_dt(double limit, double dx) {
  const double j = std::ceil(-8.0 * std::log2(limit / dx) - 1e-12);
  double dt = dx * std::exp2(-j / 8.0);
  if (dt > limit) dt = dx * std::exp2(-(j + 1.0) / 8.0);
  return dt;
}

}  // namespace

double stable_dt(const PeriodicField& state, const RunConfig& config) {
  const double dx = state.spacing();
  const double speed = max_speed_of(state.samples(), config.flux);
  if (speed == 0.0) return dx;
  return config.cfl_safety * dx / speed;
}

PeriodicField step(const PeriodicField& state, double dt, const RunConfig& config) {
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::domain, "step size must be positive");
  RunConfig local = config;
  local.n_grid = state.size();
  Stepper stepper(local);
  std::vector<Complex> c(state.coefficients().begin(), state.coefficients().end());
  stepper.nonlinear_from_grid(state.samples(), stepper.k1());
  stepper.advance(c, dt);
  stepper.to_grid(c);
  if (!all_finite(stepper.grid())) throw InstabilityError(1, dt, "non-finite value after step 1");
  return PeriodicField::from_coefficients(state.size(), c);
}

Trajectory integrate(const RunConfig& config) {
  validate(config);
  Trajectory traj{config, {}, {}};
  const std::size_t n = config.n_grid;
  const double dx = 1.0 / static_cast<double>(n);
  const PeriodicField start = config.u0.size() == n ? config.u0 : resample(config.u0, n);

  Stepper stepper(config);
  std::vector<Complex> c(start.coefficients().begin(), start.coefficients().end());
  std::size_t next_snapshot = 0;
  double t = 0.0;
  std::size_t steps = 0;

  stepper.to_grid(c);
  traj.stats.push_back(measure(0, 0.0, 0.0, c, stepper.grid(), config.flux));
  const double energy_limit = 4.0 * traj.stats.front().energy + 1e-300;

  auto emit_due = [&] {
    while (next_snapshot < config.snapshot_times.size() &&
           config.snapshot_times[next_snapshot] <= t) {
      traj.snapshots.push_back({t, t == 0.0 ? start : PeriodicField::from_coefficients(n, c)});
      ++next_snapshot;
    }
  };
  emit_due();

  while (t < config.t_end) {
    const StepStats& now = traj.stats.back();
    double dt = now.max_speed == 0.0 ? dx : config.cfl_safety * dx / now.max_speed;
    // Late in a run the CFL step grows far beyond the time scale on which the
    // enstrophy decays; cap it so the trapezoid energy budget stays accurate.
    // A safety factor above 1 is an explicit override and is left uncapped.
    if (config.cfl_safety <= 1.0 && traj.stats.size() >= 2) {
      const StepStats& before = traj.stats[traj.stats.size() - 2];
      if (before.enstrophy > 0.0 && now.enstrophy > 0.0 && now.dt > 0.0) {
        const double rate = std::abs(std::log(now.enstrophy / before.enstrophy)) / now.dt;
        if (rate > 0.0) dt = std::min(dt, enstrophy_change_per_step / rate);
      }
    }
    dt = std::min(ladder_dt(dt, dx), config.max_dt);
    const double target = next_snapshot < config.snapshot_times.size()
                              ? config.snapshot_times[next_snapshot]
                              : config.t_end;
    bool lands = false;
    if (t + dt >= target) {
      dt = target - t;
      lands = true;
    }
    stepper.nonlinear_from_grid(stepper.grid(), stepper.k1());
    stepper.advance(c, dt);
    ++steps;
    t = lands ? target : t + dt;
    stepper.to_grid(c);
    if (!all_finite(stepper.grid())) {
      std::ostringstream msg;
      msg << "non-finite value at step " << steps << " (t = " << t << ")";
      throw InstabilityError(steps, t, msg.str());
    }
    traj.stats.push_back(measure(steps, t, dt, c, stepper.grid(), config.flux));
    if (!(traj.stats.back().energy <= energy_limit)) {
      std::ostringstream msg;
      msg << "energy grew from " << traj.stats.front().energy << " to "
          << traj.stats.back().energy << " at step " << steps << " (t = " << t << ")";
      throw InstabilityError(steps, t, msg.str());
    }
    emit_due();
  }
  return traj;
}

namespace {

// Integral of a positive quantity over one step from its exponential interpolant,
// which is exact for a single decaying mode; trapezoid when the ends coincide.
double step_integral(double a, double b, double dt) {
  if (a > 0.0 && b > 0.0) {
    const double r = std::log(b / a);
    if (std::abs(r) > 1e-6) return dt * (b - a) / r;
  }
  return 0.5 * dt * (a + b);
}

}  // namespace

double energy_balance_residual(const Trajectory& traj) {
  if (traj.snapshots.size() < 2 || traj.stats.empty()) return 0.0;
  const double nu = traj.config.nu;
  double worst = 0.0;
  std::size_t i = 0;
  const auto& s = traj.stats;
  for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
    const double t1 = traj.snapshots[k].t;
    const double t2 = traj.snapshots[k + 1].t;
    while (i < s.size() && s[i].t < t1) ++i;
    if (i >= s.size() || s[i].t != t1) fail(ErrorKind::internal, "stats do not contain snapshot time");
    const double e1 = s[i].energy;
    double integral = 0.0;
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1].t <= t2) {
      integral += step_integral(s[j].enstrophy, s[j + 1].enstrophy, s[j + 1].t - s[j].t);
      ++j;
    }
    const double e2 = s[j].energy;
    if (e1 == 0.0) continue;
    worst = std::max(worst, std::abs(e2 - e1 + 2.0 * nu * integral) / e1);
  }
  return worst;
}

PeriodicField random_initial_condition(std::size_t n, std::uint64_t seed, int modes) {
  require(modes >= 1 && modes <= 8, ErrorKind::config, "initial condition modes must be in 1..8");
  std::mt19937_64 rng(seed);
  // Built from raw bits so the sequence does not depend on the standard library.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<double> amplitude(static_cast<std::size_t>(modes));
  std::vector<double> phase(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j) {
    amplitude[static_cast<std::size_t>(j)] = (0.5 + 0.5 * uniform()) / ((j + 1) * (j + 1));
    phase[static_cast<std::size_t>(j)] = 2.0 * pi * uniform();
  }
  auto raw = [&](double x) {
    double v = 0.0;
    for (int j = 0; j < modes; ++j) {
      v += amplitude[static_cast<std::size_t>(j)] *
           std::sin(2.0 * pi * (j + 1) * x + phase[static_cast<std::size_t>(j)]);
    }
    return v;
  };
  // The maximum is taken on a fixed fine grid so the function is independent of n.
  constexpr std::size_t reference = 1 << 14;
  double peak = 0.0;
  for (std::size_t j = 0; j < reference; ++j) {
    peak = std::max(peak, std::abs(raw(static_cast<double>(j) / reference)));
  }
  return project_zero_mean(sample_function(n, [&](double x) { return raw(x) / peak; }));
}

std::vector<double> snapshot_schedule(double t_end, int uniform, int logarithmic, double t_min) {
  require(t_end >= 0.0, ErrorKind::config, "snapshot schedule needs t_end >= 0");
  std::vector<double> times{0.0};
  if (t_end == 0.0) return times;
  for (int i = 1; i <= uniform; ++i) times.push_back(t_end * i / uniform);
  if (logarithmic > 1 && t_min > 0.0 && t_min < t_end) {
    const double a = std::log(t_min);
    const double b = std::log(t_end);
    for (int i = 0; i < logarithmic; ++i) {
      times.push_back(std::exp(a + (b - a) * i / (logarithmic - 1)));
    }
  }
  times.push_back(t_end);
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  for (double t : times) {
    if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, t_end)) out.push_back(std::min(t, t_end));
  }
  out.back() = t_end;
  return out;
}

void write_stats_csv(std::ostream& out, const Trajectory& traj, std::string_view config_hash) {
  out << provenance_line(config_hash) << '\n' << "step,t,dt,energy,enstrophy,maxslope\n";
  out.precision(17);
  for (const auto& s : traj.stats) {
    out << s.step << ',' << s.t << ',' << s.dt << ',' << s.energy << ',' << s.enstrophy << ','
        << s.max_slope << '\n';
  }
}

}  // namespace burgulence
