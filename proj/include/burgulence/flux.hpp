#pragma once

#include <string>

namespace burgulence {

enum class FluxFamily { quadratic, quartic, cosh };

const char* to_string(FluxFamily family) noexcept;
/// Parses "quadratic" | "quartic" | "cosh"; anything else is a configuration error.
FluxFamily parse_flux_family(const std::string& name);

/// Smooth strongly convex flux f with f(0) = 0, restricted to a certified working
/// range [-u_max, u_max] on which f'' >= sigma > 0.
///
///   quadratic  f(u) = u^2/2
///   quartic    f(u) = u^2/2 + epsilon u^4
///   cosh       f(u) = cosh(u) - 1
class FluxModel {
 public:
  static constexpr double default_working_range = 10.0;

  static FluxModel quadratic(double u_max = default_working_range);
  static FluxModel quartic(double epsilon, double u_max = default_working_range);
  static FluxModel cosh(double u_max = default_working_range);

  FluxFamily family() const noexcept { return family_; }
  double epsilon() const noexcept { return epsilon_; }
  double sigma() const noexcept { return sigma_; }
  double working_range() const noexcept { return u_max_; }
  /// All built-in families satisfy f(-u) = f(u).
  bool is_even() const noexcept { return true; }

  /// Same family, re-certified on [-u_max, u_max].
  FluxModel with_working_range(double u_max) const;

  double f(double u) const;
  double df(double u) const;
  double d2f(double u) const;

 private:
  FluxModel(FluxFamily family, double epsilon, double u_max);

  FluxFamily family_;
  double epsilon_;
  double u_max_;
  double sigma_;
};

/// f(u), f'(u) or f''(u) for order 0, 1, 2.
double flux_eval(const FluxModel& flux, double u, int order);

/// Exact minimum of f'' over [-u_max, u_max]; rejects ranges where f'' reaches 0.
double convexity_bound(const FluxModel& flux, double u_max);

struct LegendreResult {
  double value;      ///< f*(s) = sup_u (s u - f(u))
  double maximizer;  ///< u* = (f')^{-1}(s)
};

/// Legendre transform; closed form for the quadratic family, bisection on f'(u) = s
/// over the working range otherwise.
LegendreResult legendre(const FluxModel& flux, double s);

/// (f')^{-1}(s) on the working range, which is also the derivative of f*.
double inverse_derivative(const FluxModel& flux, double s);

}  // namespace burgulence
