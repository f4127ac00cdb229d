#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "burgulence/error.hpp"
#include "burgulence/flux.hpp"

using namespace burgulence;

namespace {

std::vector<FluxModel> families() {
  return {FluxModel::quadratic(), FluxModel::quartic(0.1, 3.0), FluxModel::cosh(4.0)};
}

// Brute-force sup_u (s u - f(u)) on a fine grid plus a local parabola refinement.
double legendre_by_scan(const FluxModel& flux, double s) {
  const double r = flux.working_range();
  const int n = 200000;
  double best = -INFINITY;
  int arg = 0;
  for (int i = 0; i <= n; ++i) {
    const double u = -r + 2.0 * r * i / n;
    const double v = s * u - flux.f(u);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (arg == 0 || arg == n) return best;
  const double h = 2.0 * r / n;
  const double u1 = -r + 2.0 * r * arg / n;
  const double a = s * (u1 - h) - flux.f(u1 - h), c = s * (u1 + h) - flux.f(u1 + h);
  const double denom = a - 2.0 * best + c;
  return denom < 0.0 ? best - 0.125 * (c - a) * (c - a) / denom : best;
}

}  // namespace

TEST(Flux, EvaluatesQuadratic) {
  const auto f = FluxModel::quadratic();
  EXPECT_DOUBLE_EQ(flux_eval(f, 2.0, 1), 2.0);
  EXPECT_DOUBLE_EQ(flux_eval(f, 3.0, 0), 4.5);
  EXPECT_DOUBLE_EQ(flux_eval(f, -1.5, 2), 1.0);
}

TEST(Flux, CoshCurvatureAtZero) { EXPECT_DOUBLE_EQ(flux_eval(FluxModel::cosh(), 0.0, 2), 1.0); }

TEST(Flux, QuarticDerivatives) {
  const auto f = FluxModel::quartic(0.5, 2.0);
  EXPECT_DOUBLE_EQ(f.f(1.0), 1.0);
  EXPECT_DOUBLE_EQ(f.df(1.0), 3.0);
  EXPECT_DOUBLE_EQ(f.d2f(1.0), 7.0);
}

TEST(Flux, RejectsUnknownOrder) {
  EXPECT_THROW(flux_eval(FluxModel::quadratic(), 1.0, 3), Error);
}

TEST(Legendre, SlopeOutsideImageIsRangeError) {
  const auto flux = FluxModel::cosh(2.0);
  try {
    legendre(flux, 2.0 * std::sinh(2.0));
    FAIL() << "expected a range error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::range);
  }
}

TEST(Flux, ParsesFamilies) {
  EXPECT_EQ(parse_flux_family("quadratic"), FluxFamily::quadratic);
  EXPECT_EQ(parse_flux_family("cosh"), FluxFamily::cosh);
  EXPECT_THROW(parse_flux_family("cubic"), Error);
}

TEST(ConvexityBound, MatchesMinimumCurvature) {
  EXPECT_DOUBLE_EQ(convexity_bound(FluxModel::quadratic(), 10.0), 1.0);
  EXPECT_DOUBLE_EQ(convexity_bound(FluxModel::quartic(0.5), 2.0), 1.0);
  EXPECT_DOUBLE_EQ(convexity_bound(FluxModel::cosh(), 5.0), 1.0);
}

TEST(ConvexityBound, RejectsConcaveQuartic) {
  EXPECT_THROW(FluxModel::quartic(-0.1, 2.0), Error);
}

TEST(Legendre, QuadraticClosedForm) {
  const auto r = legendre(FluxModel::quadratic(), 3.0);
  EXPECT_DOUBLE_EQ(r.value, 4.5);
  EXPECT_DOUBLE_EQ(r.maximizer, 3.0);
  EXPECT_DOUBLE_EQ(legendre(FluxModel::quadratic(), 0.0).value, 0.0);
}

TEST(Legendre, CoshAtSinhOne) {
  const auto flux = FluxModel::cosh();
  const auto r = legendre(flux, std::sinh(1.0));
  EXPECT_NEAR(r.maximizer, 1.0, 1e-10);
  EXPECT_NEAR(r.value, std::sinh(1.0) - (std::cosh(1.0) - 1.0), 1e-12);
  EXPECT_NEAR(r.value, legendre_by_scan(flux, std::sinh(1.0)), 1e-9);
}

TEST(Legendre, AgreesWithGridMaximisation) {
  for (const auto& flux : families()) {
    for (double s : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
      EXPECT_NEAR(legendre(flux, s).value, legendre_by_scan(flux, s), 1e-8) << to_string(flux.family());
    }
  }
}

TEST(LegendreProperty, YoungInequalityWithEqualityOnTheGraph) {
  std::mt19937_64 rng(7);
  for (const auto& flux : families()) {
    std::uniform_real_distribution<double> us(-0.9 * flux.working_range(), 0.9 * flux.working_range());
    const double s_max = 0.9 * flux.df(0.9 * flux.working_range());
    std::uniform_real_distribution<double> ss(-s_max, s_max);
    for (int i = 0; i < 1000; ++i) {
      const double u = us(rng), s = ss(rng);
      const double gap = flux.f(u) + legendre(flux, s).value - s * u;
      EXPECT_GE(gap, -1e-10);
      const double s_on = flux.df(u);
      if (std::abs(s_on) < s_max) {
        EXPECT_NEAR(flux.f(u) + legendre(flux, s_on).value - s_on * u, 0.0, 1e-10 * (1.0 + std::abs(s_on * u)));
      }
    }
  }
}

TEST(LegendreProperty, MaximiserSolvesDerivativeEquation) {
  for (const auto& flux : families()) {
    const double tol = flux.family() == FluxFamily::quadratic ? 1e-10 : 1e-8;
    for (double s = -1.5; s <= 1.5; s += 0.125) {
      EXPECT_LE(std::abs(flux.df(legendre(flux, s).maximizer) - s), tol);
    }
  }
}

TEST(FluxProperty, DerivativeStrictlyIncreasing) {
  for (const auto& flux : families()) {
    const double r = flux.working_range();
    const int n = 4000;
    const double h = 2.0 * r / n;
    for (int i = 0; i < n; ++i) {
      const double u = -r + i * h;
      EXPECT_GE(flux.df(u + h) - flux.df(u), flux.sigma() * h * (1.0 - 1e-8));
    }
  }
}

TEST(FluxProperty, Even) {
  for (const auto& flux : families()) {
    EXPECT_TRUE(flux.is_even());
    for (double u : {0.3, 1.1, 2.5}) EXPECT_DOUBLE_EQ(flux.f(u), flux.f(-u));
  }
}
