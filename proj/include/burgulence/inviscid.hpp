#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "burgulence/field.hpp"
#include "burgulence/flux.hpp"

namespace burgulence {

// Entropy solutions of u_t + (f(u))_x = 0 from the Lax-Oleinik formula. The initial
// datum is the piecewise-linear interpolant of the samples of u0, so its
// antiderivative U0 is exact and piecewise quadratic.

struct ShockTime {
  double t_star;  ///< +infinity when f'(u0) is nondecreasing off the discontinuities
  /// Grid cells [x_j, x_{j+1}] carrying a jump of the initial datum itself; they are
  /// excluded from t_star.
  std::vector<double> initial_discontinuities;
};

/// t* = 1 / max_j ( -(f'(u0_{j+1}) - f'(u0_j)) / dx ) over grid cells.
ShockTime shock_time(const PeriodicField& u0, const FluxModel& flux);

struct LaxOleinikValue {
  double u_minus;  ///< u(t, x-), from the smallest minimiser y-
  double u_plus;   ///< u(t, x+), from the largest minimiser y+
  double y_minus;
  double y_plus;
  bool is_shock() const noexcept;
};

/// Minimises G(y) = U0(y) + t f*((x - y)/t) for a fixed datum; reusable across (t, x).
class LaxOleinik {
 public:
  LaxOleinik(const PeriodicField& u0, const FluxModel& flux);

  /// Global search over the characteristic cone.
  LaxOleinikValue eval(double t, double x) const;
  /// Search restricted to [y_lo, y_hi], which must contain every minimiser.
  LaxOleinikValue eval(double t, double x, double y_lo, double y_hi) const;

  double datum(double y) const;            ///< u0 (piecewise linear, periodic)
  double antiderivative(double y) const;   ///< U0, periodic
  double objective(double t, double x, double y) const;  ///< G(y)
  double objective_slope(double t, double x, double y) const;  ///< G'(y)

  double datum_min() const noexcept { return u_min_; }
  double datum_max() const noexcept { return u_max_; }
  const FluxModel& flux() const noexcept { return flux_; }
  std::size_t size() const noexcept { return u_.size(); }

 private:
  std::vector<double> u_;
  std::vector<double> prefix_;  // U0 at grid nodes, prefix_[n] closes the period
  FluxModel flux_;
  double h_;
  double u_min_;
  double u_max_;
  double slope_bound_;  // max positive slope of u0
};

/// Pair (u(t, x-), u(t, x+)); the two agree away from shocks.
std::pair<double, double> lax_oleinik_eval(const PeriodicField& u0, const FluxModel& flux, double t,
                                           double x);

/// Solves x = y + t f'(u0(y)) by bisection; requires 0 < t < t*.
double characteristics_eval(const PeriodicField& u0, const FluxModel& flux, double t, double x);

struct Shock {
  double x;
  double u_left;
  double u_right;
};

struct InviscidSolution {
  PeriodicField field;           ///< midpoint values at grid shocks, mean-projected
  std::vector<Shock> shocks;
  double raw_mean;               ///< rectangle-rule mean of the sampled values
  double conservation_defect;    ///< shock-aware quadrature of the sampled profile
};

/// Samples the entropy solution on n_out points. Asserts monotonicity of the
/// minimiser and a conservation defect below 1e-6.
InviscidSolution solve_inviscid(const PeriodicField& u0, const FluxModel& flux, double t,
                                std::size_t n_out);

/// Columns x_shock,u_left,u_right.
void write_shocks_csv(std::ostream& out, const InviscidSolution& solution,
                      std::string_view config_hash);

}  // namespace burgulence
