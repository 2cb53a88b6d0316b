#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "wavecb/grid.hpp"
#include "wavecb/medium.hpp"
#include "wavecb/source.hpp"

namespace wavecb {

/// Cubic detector volume, a sharp cut (no apodization).
struct Detector {
  Vec3 center{1.0, 0.0, 0.0};
  double side = 0.8;  // l/L, in (0,1)

  bool contains(const Vec3& p, double shrink = 0.0) const {
    const double h = 0.5 * side - shrink;
    return std::abs(p.x - center.x) <= h && std::abs(p.y - center.y) <= h &&
           std::abs(p.z - center.z) <= h;
  }
  void validate(const Grid3D& grid) const;
};

struct NoiseSpec {
  double sigma_n = 0.0;
  std::uint64_t seed = 2;
  // correlation envelope Phi(r) = exp(-r^2/2), Phi(0) = 1
  double phi(double r) const;
  double phi_hat(double k) const;  // (2 pi)^(3/2) exp(-k^2/2)
};

/// One measurement component as spectral data (centered convention):
/// pressure p, its time derivative pt, and either a velocity potential A
/// (v = -ik A; wave components) or explicit velocity fields (noise).
struct FieldSet {
  Grid3D grid;
  double time = 0.0;
  cvec p, pt;
  cvec A;                   // empty if velocity is explicit or absent
  std::array<cvec, 3> v;    // empty for wave components

  bool has_A() const { return !A.empty(); }
  bool has_v() const { return !v[0].empty(); }
  void scale(double s);
  /// this += s * other (grids must match; merges A/v representations)
  void axpy(double s, const FieldSet& other);
  /// explicit spectral velocity along one axis
  cvec velocity_axis(int axis) const;
};

/// Free propagation of an initial pressure spectrum for time t:
/// p_hat = cos(|k|t) p0_hat, pt_hat = -|k| sin(|k|t) p0_hat,
/// A = sin(|k|t)/|k| p0_hat (so v = -ik A).
FieldSet propagate_free(const cvec& p0_spectrum, const Grid3D& grid, double t);

FieldSet ballistic(const SourceSpec& source, double t, const Grid3D& grid);

/// Damped coherent field  e^(-Sigma t/2) * ballistic.
FieldSet mean_field(const SourceSpec& source, double t, const Grid3D& grid,
                    double Sigma);

/// Single-scattering (Born) fluctuation
///   dp_hat(t,k) = sigma0 e^(-Sigma t/2) Int_0^t sin(|k|(t-s))/|k|
///                 F[ V * IF[ |.|^2 cos(|.|s) p0_hat ] ](k) ds,
/// the s-integral done by Gauss-Legendre over time nodes sized to the grid
/// Nyquist (each node one FFT pair, V applied in real space). Velocity and
/// dt-pressure accumulate from the same nodes.
FieldSet born_field(const SourceSpec& source, const RandomField& medium,
                    const MediumSpec& mspec, double t, const Grid3D& grid,
                    double Sigma);

/// Same synthesis driven by an explicit initial spectrum and medium samples
/// (the single-mode oracle path). b_src bounds the driving band for the
/// time-node count.
FieldSet born_field_from_spectrum(const cvec& p0_spectrum,
                                  const std::vector<double>& medium_values,
                                  double sigma0, double t, const Grid3D& grid,
                                  double Sigma, double b_src);

/// Exact two-frequency time kernel Int_0^t sin(a(t-s)) cos(b s) ds =
/// a (cos(bt) - cos(at)) / (a^2 - b^2), with the resonant limit
/// (t/2) sin(at) taken through a series switch at |a-b| < 1e-6 a.
double wave_time_kernel(double a, double b, double t);
/// Int_0^t of the above in t' (velocity kernel): [a sin(bt)/b - sin(at)]/(a^2-b^2).
double wave_time_kernel_integral(double a, double b, double t);

/// Additive detector noise: four independent stationary Gaussian fields
/// (3 velocity + 1 pressure) with spectrum eps^3 Phi_hat(eps k), scaled by
/// sigma_n. Independent of the medium RNG stream; pt = 0.
FieldSet detector_noise(const NoiseSpec& noise, double epsilon,
                        const Grid3D& grid, double t = 1.0);

enum class MeasureSelect {
  mean_only,
  born_only,
  noise_only,
  mean_born,
  mean_noise,
  total,
};

/// Measurement at time T: mean + born + noise, components kept separate so
/// functional variances can be attributed.
struct Measurement {
  Grid3D grid;
  Detector detector;
  double time = 1.0;
  FieldSet mean, born, noise;  // empty p marks an absent component

  cvec combined_p(MeasureSelect sel) const;
  cvec combined_pt(MeasureSelect sel) const;
  cvec combined_v(MeasureSelect sel, int axis) const;
  /// Real pressure samples on the full grid (restriction to the detector is
  /// the imaging functional's job).
  std::vector<double> real_pressure(MeasureSelect sel) const;
  std::vector<double> real_pressure_t(MeasureSelect sel) const;
};

Measurement assemble_measurement(FieldSet mean, FieldSet born, FieldSet noise,
                                 const Detector& detector);

/// Spectral L2 energy of the (cos, sin) propagated pair; time-invariant for
/// free propagation.
double propagation_energy(const FieldSet& f);

}  // namespace wavecb
