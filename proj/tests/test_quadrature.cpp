#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavecb/quadrature.hpp"

using namespace wavecb;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  // int_0^1 x^9 dx = 0.1 needs m >= 5
  const double v = integrate_gl([](double x) { return std::pow(x, 9); }, 0, 1, 5);
  CHECK(v == doctest::Approx(0.1).epsilon(1e-13));
  // weights sum to the interval length
  const GaussLegendre g = GaussLegendre::on(-2.0, 3.0, 33);
  double ws = 0;
  for (double w : g.w) ws += w;
  CHECK(ws == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("GL handles oscillatory integrands once nodes resolve the phase") {
  // int_0^1 cos(w s) ds = sin(w)/w
  const double w = 120.0;
  const double v =
      integrate_gl([&](double s) { return std::cos(w * s); }, 0, 1, 96);
  CHECK(v == doctest::Approx(std::sin(w) / w).epsilon(1e-12));
}

TEST_CASE("composite oscillatory integrator converges and flags") {
  const double w = 240.0;
  QuadResult r = integrate_oscillatory(
      [&](double s) { return std::sin(w * s); }, 0, 1, w, 1e-12);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx((1 - std::cos(w)) / w).epsilon(1e-10));

  // a nasty integrand with a misleading frequency hint still converges by
  // panel doubling
  QuadResult r2 = integrate_oscillatory(
      [&](double s) { return std::sin(60.0 * s * s); }, 0, 2, 10.0, 1e-10);
  CHECK(r2.converged);
}

TEST_CASE("gaussian integral cross-check") {
  const double v = integrate_gl(
      [](double s) { return std::exp(-0.5 * s * s); }, -8.5, 8.5, 64);
  CHECK(v == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
}
