#include "wavecb/source.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavecb/quadrature.hpp"

namespace wavecb {

void SourceSpec::validate() const {
  if (!(k0 > 0)) throw std::invalid_argument("source: k0 must be > 0");
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("source: epsilon must lie in (0,1)");
  if (!(mu > 1))
    throw std::invalid_argument("source: mu must exceed 1");
  if (!(mu * mu * epsilon < 1))
    throw std::invalid_argument(
        "source: broadband condition mu^2*eps < 1 violated");
}

double SourceSpec::g(double s) const { return std::exp(-0.5 * s * s); }

double SourceSpec::g_integral() const {
  return std::sqrt(2.0 * std::numbers::pi);
}

double spectral_profile(const SourceSpec& spec, double abs_k) {
  const double e3 = spec.epsilon * spec.epsilon * spec.epsilon;
  return spec.mu * e3 *
         spec.g(spec.epsilon * spec.mu * (abs_k - spec.carrier()));
}

namespace {

// Radial reduction: p0(r) = 4 pi mu eps^3 int_0^inf kappa^2 g(...) sinc(kappa r) dkappa.
// Substituting kappa = kc + s/(eps*mu) maps the shell to s = O(1).
struct ShellIntegrand {
  const SourceSpec& spec;
  double smin, smax;
  double kappa(double s) const {
    return spec.carrier() + s / (spec.epsilon * spec.mu);
  }
};

ShellIntegrand make_shell(const SourceSpec& spec) {
  const double cut = 8.5;  // g(8.5) ~ 2e-16
  return {spec, std::max(-cut, -spec.epsilon * spec.mu * spec.carrier()), cut};
}

}  // namespace

double p0_peak(const SourceSpec& spec) {
  const ShellIntegrand sh = make_shell(spec);
  const double pref = 4.0 * std::numbers::pi * spec.epsilon * spec.epsilon;
  return pref * integrate_gl(
                    [&](double s) {
                      const double k = sh.kappa(s);
                      return k * k * spec.g(s);
                    },
                    sh.smin, sh.smax, 64);
}

double evaluate_p0(const SourceSpec& spec, double r) {
  if (r < 1e-12) return p0_peak(spec);
  const ShellIntegrand sh = make_shell(spec);
  const double pref = 4.0 * std::numbers::pi * spec.epsilon * spec.epsilon;
  const double freq = r / (spec.epsilon * spec.mu);
  QuadResult q = integrate_oscillatory(
      [&](double s) {
        const double k = sh.kappa(s);
        return k * k * spec.g(s) * std::sin(k * r) / (k * r);
      },
      sh.smin, sh.smax, freq, 1e-11);
  if (!q.converged)
    throw std::runtime_error("evaluate_p0: shell quadrature did not converge");
  return pref * q.value;
}

double source_envelope(const SourceSpec& spec, double r) {
  if (r < 1e-12) r = 1e-12;
  const ShellIntegrand sh = make_shell(spec);
  const double pref = 4.0 * std::numbers::pi * spec.epsilon * spec.epsilon;
  const double freq = r / (spec.epsilon * spec.mu);
  auto part = [&](bool imag_part) {
    QuadResult q = integrate_oscillatory(
        [&](double s) {
          const double k = sh.kappa(s);
          const double ph = k * r;
          return k * spec.g(s) * (imag_part ? std::sin(ph) : std::cos(ph));
        },
        sh.smin, sh.smax, freq, 1e-11);
    if (!q.converged)
      throw std::runtime_error(
          "source_envelope: shell quadrature did not converge");
    return q.value;
  };
  const double re = part(false), im = part(true);
  return pref / r * std::hypot(re, im);
}

cvec source_spectrum(const SourceSpec& spec, const Grid3D& grid) {
  spec.validate();
  const std::vector<double> absk = grid.make_abs_k();
  const double dk = 2.0 * std::numbers::pi / grid.box;
  const double cell = dk * dk * dk * static_cast<double>(grid.size());
  cvec out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cell * spectral_profile(spec, absk[i]);
  return out;
}

}  // namespace wavecb
