#pragma once

#include <cstddef>
#include <vector>

#include "burgulence/field.hpp"

namespace burgulence {

/// Viscosities below this overflow exp(-U0/(2 nu)) in double precision.
inline constexpr double cole_hopf_nu_floor = 1e-4;

/// phi0 = exp(-(U0 - min U0)/(2 nu)) on an oversampled grid, U0 the zero-mean
/// antiderivative of u0. Solves phi_t = nu phi_xx exactly mode by mode.
struct HeatPotential {
  std::vector<Complex> phi0_coeffs;  // k = 0..n_grid/2
  double nu;
  std::size_t n_grid;
};

/// `oversample` multiplies max(u0.size(), n_out); `shift_exponent` = false skips the
/// min U0 normalisation (only sensible at moderate nu).
HeatPotential make_heat_potential(const PeriodicField& u0, double nu, std::size_t n_out,
                                  int oversample = 4, bool shift_exponent = true);

/// u = -2 nu phi_x / phi at time t, sampled on n_out points and mean-projected.
PeriodicField evaluate(const HeatPotential& potential, double t, std::size_t n_out);

/// Exact classical (f = u^2/2) viscous solution at time t.
PeriodicField solve_classical(const PeriodicField& u0, double nu, double t, std::size_t n_out);

}  // namespace burgulence
