#include "wavecb/attenuation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavecb/quadrature.hpp"

namespace wavecb {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sigma_quadrature(const MediumSpec& medium, const SourceSpec& source) {
  medium.validate();
  if (medium.sigma0 == 0.0) return 0.0;
  const double d = medium.delta;
  const double ek = medium.eta * source.k0;

  // Int_{S^2} Rhat(eta k0 |khat - phat|) dphat
  //   = 2 pi Int_0^2 u^(-d/2) * S(ek sqrt(2u)) * (ek sqrt(2))^(-d) ... du
  // with u = 1 - cos(theta); u = w^(2/(2-d)) makes the integrand smooth.
  const double a = 2.0 / (2.0 - d);
  const double wmax = std::pow(2.0, 1.0 / a);
  const double body = integrate_gl(
      [&](double w) {
        const double u = std::pow(w, a);
        return medium.envelope_S(ek * std::sqrt(2.0 * u));
      },
      0.0, wmax, 96);
  const double sphere = 2.0 * kPi * std::pow(ek * std::sqrt(2.0), -d) * a *
                        body;

  const double k0 = source.k0;
  const double pref = std::pow(medium.eta, 3.0) * medium.sigma0 *
                      medium.sigma0 / source.epsilon * kPi *
                      std::pow(k0, 4.0) / (2.0 * std::pow(2.0 * kPi, 3.0));
  return pref * sphere;
}

double sigma_longrange_closed(const MediumSpec& medium,
                              const SourceSpec& source) {
  medium.validate();
  const double d = medium.delta;
  if (d > 2.0 - 1e-9)
    throw std::overflow_error(
        "sigma_longrange_closed: Sigma diverges as delta -> 2");
  const double k0 = source.k0;
  return medium.sigma0 * medium.sigma0 * std::pow(medium.eta, 3.0 - d) *
         std::pow(k0, 4.0 - d) / source.epsilon * medium.s0_effective() /
         (std::pow(2.0, d) * 4.0 * kPi * (1.0 - d / 2.0));
}

double sigma_rayleigh(const MediumSpec& medium, const SourceSpec& source) {
  if (medium.delta != 0.0)
    throw std::invalid_argument("sigma_rayleigh: requires delta = 0");
  const double k0 = source.k0;
  return std::pow(medium.eta, 3.0) * medium.sigma0 * medium.sigma0 /
         source.epsilon * kPi * std::pow(k0, 4.0) * medium.envelope_S(0.0) /
         std::pow(2.0 * kPi, 2.0);
}

GammaIdentity gamma_identity_check(double delta) {
  if (!(delta > 0.0 && delta < 2.0))
    throw std::invalid_argument("gamma_identity_check: delta in (0,2)");
  const double d = delta;

  // I = Int_0^inf (1 - cos r) r^(d-3) dr, split at r0 = 1 and A.
  const double r0 = 1.0, A = 40.0 * kPi;

  // [0, r0]: series of 1 - cos r, integrated term by term.
  double head = 0.0;
  double fact = 1.0;  // (2j)!
  for (int j = 1; j <= 24; ++j) {
    fact *= (2.0 * j - 1.0) * (2.0 * j);
    const double p = 2.0 * j + d - 2.0;
    const double term = ((j % 2) ? 1.0 : -1.0) / fact * std::pow(r0, p) / p;
    head += term;
    if (std::abs(term) < 1e-18) break;
  }

  // [r0, A]: smooth oscillatory part.
  QuadResult mid = integrate_oscillatory(
      [&](double r) { return (1.0 - std::cos(r)) * std::pow(r, d - 3.0); },
      r0, A, 1.0, 1e-12);

  // [A, inf): secular piece exactly, cosine piece by integration by parts.
  const double secular = std::pow(A, d - 2.0) / (2.0 - d);
  double osc = 0.0;  // Int_A^inf cos r * r^p dr, p = d-3
  {
    const double p = d - 3.0;
    // T(p) = -sin(A) A^p - p cos(A) A^(p-1) - p(p-1) T(p-2), three levels.
    double T = 0.0;
    const double p2 = p - 4.0;
    T = -std::sin(A) * std::pow(A, p2) - p2 * std::cos(A) * std::pow(A, p2 - 1.0);
    T = -std::sin(A) * std::pow(A, p - 2.0) -
        (p - 2.0) * std::cos(A) * std::pow(A, p - 3.0) -
        (p - 2.0) * (p - 3.0) * T;
    T = -std::sin(A) * std::pow(A, p) - p * std::cos(A) * std::pow(A, p - 1.0) -
        p * (p - 1.0) * T;
    osc = T;
  }
  const double integral = head + mid.value + secular - osc;

  GammaIdentity out;
  out.lhs = std::tgamma((3.0 - d) / 2.0) /
            (std::sqrt(kPi) * std::tgamma(d / 2.0)) * integral;
  out.rhs = 1.0 / (4.0 * (1.0 - d / 2.0));
  out.rhs_exact = std::pow(2.0, d - 1.0) * out.rhs;
  return out;
}

double radial_correlation(const MediumSpec& medium, double r) {
  const double d = medium.delta;
  // R(r) = (1/(2 pi^2 r)) Int_0^inf kappa^(1-d) sin(kappa r) S(kappa) dkappa,
  // with kappa = w^(1/(2-d)) to absorb the endpoint power.
  const double kcut = 6.0 * medium.ks;
  if (r < 1e-9) {
    // R(0) = (1/(2 pi^2)) Int kappa^(2-d) S dkappa
    const double a = 1.0 / (3.0 - d);
    const double wmax = std::pow(kcut, 3.0 - d);
    const double v = integrate_gl(
        [&](double w) {
          const double kap = std::pow(w, a);
          return medium.envelope_S(kap) * a;
        },
        0.0, wmax, 128);
    return v / (2.0 * kPi * kPi);
  }
  // Split at k0cut: the kappa^(1-d) endpoint power is absorbed by a
  // substitution where sin(kappa r) is still slow; beyond that the
  // integrand is smooth and the oscillatory rule applies directly.
  const double k0cut = std::min(0.2 / std::max(r, 1e-6), medium.ks);
  const double a = 1.0 / (2.0 - d);
  const double whead = std::pow(k0cut, 2.0 - d);
  const double head = integrate_gl(
      [&](double w) {
        const double kap = std::pow(w, a);
        return a * std::sin(kap * r) * medium.envelope_S(kap);
      },
      0.0, whead, 64);
  QuadResult q = integrate_oscillatory(
      [&](double kap) {
        return std::pow(kap, 1.0 - d) * std::sin(kap * r) *
               medium.envelope_S(kap);
      },
      k0cut, kcut, r, 1e-11);
  return (head + q.value) / (2.0 * kPi * kPi * r);
}

double gamma_eps_radial(const MediumSpec& medium, const SourceSpec& source) {
  const double c = 2.0 * medium.eta * source.k0;
  const double d = medium.delta;
  const double Rm = 80.0 / medium.ks;
  QuadResult q = integrate_oscillatory(
      [&](double r) {
        return (1.0 - std::cos(c * r)) * radial_correlation(medium, r);
      },
      0.0, Rm, c, 1e-8, 8);
  double tail = 0.0;
  if (d > 0.0) {
    // Power tail: R ~ A r^(d-3); keep the secular part of the remainder.
    const double A_est = radial_correlation(medium, Rm) * std::pow(Rm, 3.0 - d);
    tail = A_est * std::pow(Rm, d - 2.0) / (2.0 - d);
  }
  return medium.sigma0 * medium.sigma0 * source.k0 * source.k0 * medium.eta /
         (4.0 * source.epsilon) * (q.value + tail);
}

AttenuationResult attenuation(const MediumSpec& medium,
                              const SourceSpec& source) {
  AttenuationResult r;
  r.sigma_total = sigma_quadrature(medium, source);
  r.gamma_eps = 0.5 * r.sigma_total;
  r.method = "quadrature";
  return r;
}

}  // namespace wavecb
