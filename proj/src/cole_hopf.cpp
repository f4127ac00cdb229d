#include "burgulence/cole_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burgulence/error.hpp"

namespace burgulence {

HeatPotential make_heat_potential(const PeriodicField& u0, double nu, std::size_t n_out,
                                  int oversample, bool shift_exponent) {
  if (!(nu >= cole_hopf_nu_floor)) {
    std::ostringstream msg;
    msg << "Cole-Hopf needs nu >= " << cole_hopf_nu_floor << ", got " << nu;
    fail(ErrorKind::domain, msg.str());
  }
  require(oversample >= 1, ErrorKind::domain, "oversampling factor must be >= 1");
  require(n_out >= 16 && is_power_of_two(n_out), ErrorKind::domain,
          "output grid must be a power of two >= 16");
  const std::size_t n = static_cast<std::size_t>(oversample) * std::max(u0.size(), n_out);

  // U0^(k) = u0^(k) / (2 pi i k), zero mean.
  std::vector<Complex> big(n / 2 + 1, 0.0);
  auto src = u0.coefficients();
  const std::size_t shared = std::min(u0.size(), n) / 2;
  for (std::size_t k = 1; k <= shared; ++k) {
    Complex c = src[k];
    if (k == u0.size() / 2 && n > u0.size()) c *= 0.5;
    big[k] = c / Complex(0.0, 2.0 * pi * static_cast<double>(k));
  }
  std::vector<double> potential(n);
  thread_fft(n).inverse(big, potential);

  const double shift = shift_exponent ? *std::min_element(potential.begin(), potential.end()) : 0.0;
  for (double& v : potential) v = std::exp(-(v - shift) / (2.0 * nu));

  HeatPotential out{std::vector<Complex>(n / 2 + 1), nu, n};
  thread_fft(n).forward(potential, out.phi0_coeffs);
  return out;
}

PeriodicField evaluate(const HeatPotential& potential, double t, std::size_t n_out) {
  require(t >= 0.0 && std::isfinite(t), ErrorKind::domain, "Cole-Hopf time must be >= 0");
  const std::size_t n = potential.n_grid;
  require(n_out >= 16 && is_power_of_two(n_out) && n_out <= n, ErrorKind::domain,
          "output grid must be a power of two between 16 and the potential grid");
  const std::size_t modes = n / 2 + 1;
  std::vector<Complex> phi(modes);
  std::vector<Complex> phi_x(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double kk = 2.0 * pi * static_cast<double>(k);
    phi[k] = potential.phi0_coeffs[k] * std::exp(-kk * kk * potential.nu * t);
    phi_x[k] = (k == n / 2) ? Complex(0.0) : phi[k] * Complex(0.0, kk);
  }
  std::vector<double> p(n);
  std::vector<double> px(n);
  thread_fft(n).inverse(phi, p);
  thread_fft(n).inverse(phi_x, px);

  const std::size_t stride = n / n_out;
  std::vector<double> u(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double value = p[j * stride];
    if (!(value > 0.0)) {
      fail(ErrorKind::numerical, "heat potential is not positive on the grid (under-resolved)");
    }
    u[j] = -2.0 * potential.nu * px[j * stride] / value;
  }
  return project_zero_mean(u);
}

PeriodicField solve_classical(const PeriodicField& u0, double nu, double t, std::size_t n_out) {
  return evaluate(make_heat_potential(u0, nu, n_out), t, n_out);
}

}  // namespace burgulence
