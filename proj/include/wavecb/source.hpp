#pragma once
#include "wavecb/grid.hpp"

namespace wavecb {

/// Isotropic band-limited initial pressure
///   p0(x) = mu*eps^3 * Int g(eps*mu*(|k| - k0/eps)) exp(ik.x) dk,
/// i.e. a spherical spectral shell of radius k0/eps and width 1/(eps*mu),
/// oscillating at the carrier k0/eps with envelope support ~ eps*mu.
struct SourceSpec {
  double k0 = 2.0;       // dimensionless central wavenumber |k_0|
  double epsilon = 0.1;  // wavelength / propagation distance
  double mu = 2.0;       // bandwidth parameter, 1 << mu << 1/sqrt(eps)
  // profile g is the unit Gaussian exp(-s^2/2)

  void validate() const;
  double carrier() const { return k0 / epsilon; }
  double shell_width() const { return 1.0 / (epsilon * mu); }
  double g(double s) const;
  double g_integral() const;  // int g ds
};

/// Spectral shell amplitude mu*eps^3*g(eps*mu*(|k| - k0/eps)).
double spectral_profile(const SourceSpec& spec, double abs_k);

/// p0 at radius r, by 1D oscillatory quadrature of the shell integral.
/// Throws on quadrature non-convergence.
double evaluate_p0(const SourceSpec& spec, double r);

double p0_peak(const SourceSpec& spec);  // p0(0)

/// Envelope bound |Psi(r)|/r of p0 (demodulated magnitude); equals the
/// oscillation envelope of p0 away from r = 0.
double source_envelope(const SourceSpec& spec, double r);

/// Centered spectral coefficients of p0 sampled on the grid.
cvec source_spectrum(const SourceSpec& spec, const Grid3D& grid);

}  // namespace wavecb
