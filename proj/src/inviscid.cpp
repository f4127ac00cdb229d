#include "burgulence/inviscid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"

namespace burgulence {

namespace {

constexpr double jump_threshold = 1e-8;
constexpr double conservation_tolerance = 1e-6;

// Ties between basins are decided at this relative level; the objective is
// evaluated in closed form so genuine ties agree to a few ulps.
constexpr double tie_tolerance = 1e-13;

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

// Cells whose jump dominates both the datum's range and the typical cell
// increment are treated as discontinuities of u0 rather than steep gradients.
std::vector<bool> discontinuity_cells(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> jumps(n);
  for (std::size_t j = 0; j < n; ++j) jumps[j] = std::abs(u[(j + 1) % n] - u[j]);
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  const double range = *hi - *lo;
  const double typical = median(jumps);
  std::vector<bool> flagged(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    flagged[j] = range > 0.0 && jumps[j] > 0.1 * range && jumps[j] > 16.0 * typical;
  }
  return flagged;
}

}  // namespace

ShockTime shock_time(const PeriodicField& u0, const FluxModel& flux) {
  const auto u = u0.samples();
  const std::size_t n = u.size();
  const double dx = u0.spacing();
  const auto flagged = discontinuity_cells(u);
  ShockTime result{infinity, {}};
  double steepest = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (flagged[j]) {
      result.initial_discontinuities.push_back(u0.grid_point(j));
      continue;
    }
    const double decay = -(flux.df(u[(j + 1) % n]) - flux.df(u[j])) / dx;
    steepest = std::max(steepest, decay);
  }
  if (steepest > 0.0) result.t_star = 1.0 / steepest;
  return result;
}

bool LaxOleinikValue::is_shock() const noexcept {
  return std::abs(u_minus - u_plus) > jump_threshold;
}

LaxOleinik::LaxOleinik(const PeriodicField& u0, const FluxModel& flux)
    : u_(u0.samples().begin(), u0.samples().end()), flux_(flux), h_(u0.spacing()) {
  const std::size_t n = u_.size();
  prefix_.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    prefix_[j + 1] = prefix_[j] + 0.5 * h_ * (u_[j] + u_[(j + 1) % n]);
  }
  const auto [lo, hi] = std::minmax_element(u_.begin(), u_.end());
  u_min_ = *lo;
  u_max_ = *hi;
  slope_bound_ = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    slope_bound_ = std::max(slope_bound_, (u_[(j + 1) % n] - u_[j]) / h_);
  }
  require(std::max(std::abs(u_min_), std::abs(u_max_)) <= flux_.working_range(), ErrorKind::range,
          "initial datum leaves the flux working range");
}

double LaxOleinik::datum(double y) const {
  const double frac = y - std::floor(y);
  const std::size_t n = u_.size();
  const double pos = frac / h_;
  std::size_t j = std::min(static_cast<std::size_t>(pos), n - 1);
  const double tau = pos - static_cast<double>(j);
  return u_[j] + tau * (u_[(j + 1) % n] - u_[j]);
}

double LaxOleinik::antiderivative(double y) const {
  const double frac = y - std::floor(y);
  const std::size_t n = u_.size();
  const double pos = frac / h_;
  std::size_t j = std::min(static_cast<std::size_t>(pos), n - 1);
  const double tau = (pos - static_cast<double>(j)) * h_;
  const double slope = (u_[(j + 1) % n] - u_[j]) / h_;
  return prefix_[j] + u_[j] * tau + 0.5 * slope * tau * tau;
}

double LaxOleinik::objective(double t, double x, double y) const {
  return antiderivative(y) + t * legendre(flux_, (x - y) / t).value;
}

double LaxOleinik::objective_slope(double t, double x, double y) const {
  return datum(y) - inverse_derivative(flux_, (x - y) / t);
}

LaxOleinikValue LaxOleinik::eval(double t, double x) const {
  require(t > 0.0 && std::isfinite(t), ErrorKind::domain, "Lax-Oleinik needs t > 0");
  // A minimiser satisfies u0(y) = (f')^{-1}((x - y)/t), so x - y lies in t f'([min u0, max u0]).
  return eval(t, x, x - t * flux_.df(u_max_), x - t * flux_.df(u_min_));
}

LaxOleinikValue LaxOleinik::eval(double t, double x, double y_lo, double y_hi) const {
  require(t > 0.0 && std::isfinite(t), ErrorKind::domain, "Lax-Oleinik needs t > 0");
  require(std::isfinite(x), ErrorKind::numerical_input, "non-finite evaluation point");
  const double cone_lo = x - t * flux_.df(u_max_);
  const double cone_hi = x - t * flux_.df(u_min_);
  double a = std::max(y_lo, cone_lo);
  double b = std::min(y_hi, cone_hi);
  if (b < a) {
    // Bracket and cone touch only through rounding.
    if (a - b > 1e-9 * (1.0 + std::abs(x))) {
      fail(ErrorKind::internal, "Lax-Oleinik bracket misses the characteristic cone");
    }
    b = a;
  }

  const double h_scan = h_ / 8.0;
  const std::size_t m = std::max<std::size_t>(9, static_cast<std::size_t>(std::ceil((b - a) / h_scan)) + 1);
  const double step = (b > a) ? (b - a) / static_cast<double>(m - 1) : 0.0;
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = objective(t, x, a + step * static_cast<double>(i));

  // Between scan points the true minimum can undercut the sampled one by at most
  // G'' step^2 / 8; keep every basin within twice that.
  const double curvature = slope_bound_ + 1.0 / (flux_.sigma() * t);
  const double slack = 0.25 * curvature * step * step;
  const double best_sampled = *std::min_element(g.begin(), g.end());

  struct Candidate {
    double y;
    double g;
  };
  std::vector<Candidate> found;
  for (std::size_t i = 0; i < m; ++i) {
    const bool left_ok = i == 0 || g[i] <= g[i - 1];
    const bool right_ok = i + 1 == m || g[i] <= g[i + 1];
    if (!left_ok || !right_ok || g[i] > best_sampled + slack + tie_tolerance * (1.0 + std::abs(best_sampled))) continue;
    double lo = a + step * static_cast<double>(i == 0 ? 0 : i - 1);
    double hi = a + step * static_cast<double>(i + 1 == m ? m - 1 : i + 1);
    double y;
    const double slope_lo = objective_slope(t, x, lo);
    const double slope_hi = objective_slope(t, x, hi);
    if (slope_lo < 0.0 && slope_hi > 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (objective_slope(t, x, mid) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      y = 0.5 * (lo + hi);
    } else {
      // Minimum at a bracket end or on a kink of the datum: golden section on G.
      constexpr double r = 0.6180339887498949;
      double c = hi - r * (hi - lo);
      double d = lo + r * (hi - lo);
      double gc = objective(t, x, c);
      double gd = objective(t, x, d);
      while (hi - lo > 1e-12) {
        if (gc <= gd) {
          hi = d;
          d = c;
          gd = gc;
          c = hi - r * (hi - lo);
          gc = objective(t, x, c);
        } else {
          lo = c;
          c = d;
          gc = gd;
          d = lo + r * (hi - lo);
          gd = objective(t, x, d);
        }
      }
      y = 0.5 * (lo + hi);
      // The sampled point itself may still be better (flat or end minimum).
      const double yi = a + step * static_cast<double>(i);
      if (g[i] < objective(t, x, y)) y = yi;
    }
    found.push_back({y, objective(t, x, y)});
  }
  if (found.empty()) fail(ErrorKind::internal, "Lax-Oleinik minimisation found no candidate");

  double best = found.front().g;
  for (const auto& c : found) best = std::min(best, c.g);
  const double tol = tie_tolerance * (1.0 + std::abs(best));
  double y_minus = infinity;
  double y_plus = -infinity;
  for (const auto& c : found) {
    if (c.g <= best + tol) {
      y_minus = std::min(y_minus, c.y);
      y_plus = std::max(y_plus, c.y);
    }
  }
  return {inverse_derivative(flux_, (x - y_minus) / t), inverse_derivative(flux_, (x - y_plus) / t),
          y_minus, y_plus};
}

std::pair<double, double> lax_oleinik_eval(const PeriodicField& u0, const FluxModel& flux, double t,
                                           double x) {
  const LaxOleinik solver(u0, flux);
  const auto v = solver.eval(t, x);
  return {v.u_minus, v.u_plus};
}

double characteristics_eval(const PeriodicField& u0, const FluxModel& flux, double t, double x) {
  require(t > 0.0, ErrorKind::domain, "characteristics need t > 0");
  const double t_star = shock_time(u0, flux).t_star;
  if (!(t < t_star)) {
    std::ostringstream msg;
    msg << "characteristics cross at t* = " << t_star << "; t = " << t << " is past it";
    fail(ErrorKind::domain, msg.str());
  }
  const LaxOleinik datum(u0, flux);
  // phi(y) = y + t f'(u0(y)) is increasing before t*.
  double lo = x - t * flux.df(datum.datum_max());
  double hi = x - t * flux.df(datum.datum_min());
  auto phi = [&](double y) { return y + t * flux.df(datum.datum(y)) - x; };
  if (phi(lo) > 0.0 || phi(hi) < 0.0) fail(ErrorKind::internal, "characteristic bracket failure");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return datum.datum(0.5 * (lo + hi));
}

namespace {

struct GridSolver {
  const LaxOleinik& lo;
  double t;
  double h;
  std::vector<LaxOleinikValue> values;

  double x(std::size_t j) const { return static_cast<double>(j) * h; }

  // Minimisers are nondecreasing in x, so each half inherits the bracket cut at
  // the middle point.
  void fill(std::size_t first, std::size_t last, double y_lo, double y_hi) {
    if (first >= last) return;
    const std::size_t mid = first + (last - first) / 2;
    values[mid] = lo.eval(t, x(mid), y_lo, y_hi);
    fill(first, mid, y_lo, values[mid].y_minus);
    fill(mid + 1, last, values[mid].y_plus, y_hi);
  }
};

}  // namespace

InviscidSolution solve_inviscid(const PeriodicField& u0, const FluxModel& flux, double t,
                                std::size_t n_out) {
  require(t > 0.0 && std::isfinite(t), ErrorKind::domain, "inviscid solve needs t > 0");
  require(n_out >= 16 && (n_out & (n_out - 1)) == 0, ErrorKind::config,
          "n_out must be a power of two >= 16");
  const LaxOleinik lo(u0, flux);
  const double h = 1.0 / static_cast<double>(n_out);
  GridSolver grid{lo, t, h, std::vector<LaxOleinikValue>(n_out)};
  grid.values[0] = lo.eval(t, 0.0);
  const auto& origin = grid.values[0];
  grid.fill(1, n_out, origin.y_plus, origin.y_minus + 1.0);

  auto value_at = [&](std::size_t j) -> LaxOleinikValue {
    if (j < n_out) return grid.values[j];
    auto v = grid.values[0];
    v.y_minus += 1.0;
    v.y_plus += 1.0;
    return v;
  };

  for (std::size_t j = 1; j < n_out; ++j) {
    if (grid.values[j].y_minus < grid.values[j - 1].y_plus - 1e-12) {
      fail(ErrorKind::internal, "Lax-Oleinik minimiser is not monotone in x");
    }
  }

  InviscidSolution out{PeriodicField::zero(n_out), {}, 0.0, 0.0};
  std::vector<double> samples(n_out);
  double raw_sum = 0.0;
  for (std::size_t j = 0; j < n_out; ++j) {
    const auto& v = grid.values[j];
    samples[j] = v.is_shock() ? 0.5 * (v.u_minus + v.u_plus) : v.u_minus;
    raw_sum += samples[j];
    if (v.is_shock()) out.shocks.push_back({grid.x(j), v.u_minus, v.u_plus});
  }
  out.raw_mean = raw_sum / static_cast<double>(n_out);

  // Shocks strictly between grid points: the minimiser gap exceeds one cell only
  // in compressive cells; bisect those in x for the jump.
  double correction = 0.0;
  for (std::size_t j = 0; j < n_out; ++j) {
    const auto left = value_at(j);
    const auto right = value_at(j + 1);
    double a = grid.x(j);
    double b = a + h;
    double ya = left.y_plus;
    double yb = right.y_minus;
    if (!(yb - ya > h * (1.0 + 1e-9))) continue;
    double ua = left.u_plus;
    double ub = right.u_minus;
    bool exact = false;
    Shock found{};
    for (int it = 0; it < 60 && b - a > 1e-14; ++it) {
      const double c = 0.5 * (a + b);
      const auto vc = lo.eval(t, c, ya, yb);
      if (vc.is_shock()) {
        found = {c, vc.u_minus, vc.u_plus};
        exact = true;
        break;
      }
      if (vc.y_minus - ya > yb - vc.y_plus) {
        b = c;
        yb = vc.y_minus;
        ub = vc.u_minus;
      } else {
        a = c;
        ya = vc.y_plus;
        ua = vc.u_plus;
      }
    }
    if (!exact) found = {0.5 * (a + b), ua, ub};
    if (!(found.u_left - found.u_right > jump_threshold)) continue;
    out.shocks.push_back(found);
    // Replace the cell's trapezoid by trapezoids on either side of the shock.
    const double uj = samples[j];
    const double uj1 = samples[(j + 1) % n_out];
    const double s = found.x - grid.x(j);
    const double split = 0.5 * s * (uj + found.u_left) + 0.5 * (h - s) * (found.u_right + uj1);
    correction += split - 0.5 * h * (uj + uj1);
  }
  std::sort(out.shocks.begin(), out.shocks.end(),
            [](const Shock& p, const Shock& q) { return p.x < q.x; });
  out.conservation_defect = out.raw_mean + correction;
  if (!(std::abs(out.conservation_defect) <= conservation_tolerance)) {
    std::ostringstream msg;
    msg << "inviscid solution at t = " << t << " has mean " << out.conservation_defect
        << " after shock quadrature (tolerance " << conservation_tolerance << ")";
    fail(ErrorKind::numerical, msg.str());
  }
  out.field = project_zero_mean(samples);
  return out;
}

void write_shocks_csv(std::ostream& out, const InviscidSolution& solution,
                      std::string_view config_hash) {
  out << provenance_line(config_hash) << '\n' << "x_shock,u_left,u_right\n";
  out.precision(17);
  for (const auto& s : solution.shocks) out << s.x << ',' << s.u_left << ',' << s.u_right << '\n';
}

}  // namespace burgulence
