#include "burgulence/flux.hpp"

#include <cmath>
#include <sstream>

#include "burgulence/error.hpp"

namespace burgulence {

const char* to_string(FluxFamily family) noexcept {
  switch (family) {
    case FluxFamily::quadratic: return "quadratic";
    case FluxFamily::quartic: return "quartic";
    case FluxFamily::cosh: return "cosh";
  }
  return "unknown";
}

FluxFamily parse_flux_family(const std::string& name) {
  if (name == "quadratic") return FluxFamily::quadratic;
  if (name == "quartic") return FluxFamily::quartic;
  if (name == "cosh") return FluxFamily::cosh;
  fail(ErrorKind::config, "unknown flux family '" + name + "'");
}

FluxModel::FluxModel(FluxFamily family, double epsilon, double u_max)
    : family_(family), epsilon_(epsilon), u_max_(u_max), sigma_(0.0) {
  sigma_ = convexity_bound(*this, u_max);
}

FluxModel FluxModel::quadratic(double u_max) { return {FluxFamily::quadratic, 0.0, u_max}; }

FluxModel FluxModel::quartic(double epsilon, double u_max) {
  require(std::isfinite(epsilon), ErrorKind::config, "quartic epsilon must be finite");
  return {FluxFamily::quartic, epsilon, u_max};
}

FluxModel FluxModel::cosh(double u_max) { return {FluxFamily::cosh, 0.0, u_max}; }

FluxModel FluxModel::with_working_range(double u_max) const {
  return {family_, epsilon_, u_max};
}

double FluxModel::f(double u) const {
  switch (family_) {
    case FluxFamily::quadratic: return 0.5 * u * u;
    case FluxFamily::quartic: return 0.5 * u * u + epsilon_ * u * u * u * u;
    case FluxFamily::cosh: return std::cosh(u) - 1.0;
  }
  fail(ErrorKind::config, "unknown flux family");
}

double FluxModel::df(double u) const {
  switch (family_) {
    case FluxFamily::quadratic: return u;
    case FluxFamily::quartic: return u + 4.0 * epsilon_ * u * u * u;
    case FluxFamily::cosh: return std::sinh(u);
  }
  fail(ErrorKind::config, "unknown flux family");
}

double FluxModel::d2f(double u) const {
  switch (family_) {
    case FluxFamily::quadratic: return 1.0;
    case FluxFamily::quartic: return 1.0 + 12.0 * epsilon_ * u * u;
    case FluxFamily::cosh: return std::cosh(u);
  }
  fail(ErrorKind::config, "unknown flux family");
}

double flux_eval(const FluxModel& flux, double u, int order) {
  switch (order) {
    case 0: return flux.f(u);
    case 1: return flux.df(u);
    case 2: return flux.d2f(u);
    default: fail(ErrorKind::domain, "flux_eval order must be 0, 1 or 2");
  }
}

double convexity_bound(const FluxModel& flux, double u_max) {
  require(u_max > 0.0 && std::isfinite(u_max), ErrorKind::domain,
          "convexity_bound requires a finite u_max > 0");
  double minimum = 0.0;
  switch (flux.family()) {
    case FluxFamily::quadratic: minimum = 1.0; break;
    case FluxFamily::cosh: minimum = 1.0; break;
    case FluxFamily::quartic:
      // f'' = 1 + 12 eps u^2 is extremal at u = 0 or at the range boundary.
      minimum = flux.epsilon() >= 0.0 ? 1.0 : 1.0 + 12.0 * flux.epsilon() * u_max * u_max;
      break;
  }
  if (!(minimum > 0.0)) {
    std::ostringstream msg;
    msg << to_string(flux.family()) << " flux is not strongly convex on [-" << u_max << ", "
        << u_max << "]: min f'' = " << minimum;
    fail(ErrorKind::config, msg.str());
  }
  return minimum;
}

double inverse_derivative(const FluxModel& flux, double s) {
  if (flux.family() == FluxFamily::quadratic) return s;
  double lo = -flux.working_range();
  double hi = flux.working_range();
  const double f_lo = flux.df(lo);
  const double f_hi = flux.df(hi);
  if (!(s >= f_lo && s <= f_hi)) {
    std::ostringstream msg;
    msg << "slope " << s << " outside f'([-" << hi << ", " << hi << "]) = [" << f_lo << ", "
        << f_hi << "]";
    fail(ErrorKind::range, msg.str());
  }
  // f' is strictly increasing, so bisection always converges.
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (flux.df(mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(flux.df(lo) - s) <= std::abs(flux.df(hi) - s) ? lo : hi;
}

LegendreResult legendre(const FluxModel& flux, double s) {
  if (flux.family() == FluxFamily::quadratic) {
    if (std::abs(s) > flux.working_range()) {
      fail(ErrorKind::range, "slope outside the image of f' on the working range");
    }
    return {0.5 * s * s, s};
  }
  const double u = inverse_derivative(flux, s);
  return {s * u - flux.f(u), u};
}

}  // namespace burgulence
