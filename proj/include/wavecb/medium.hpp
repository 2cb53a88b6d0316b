#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavecb/grid.hpp"

namespace wavecb {

enum class SpectrumKind { gaussian, flat };

/// Random-medium description. The fluctuation field V is mean-zero,
/// stationary and isotropic with power spectrum  Rhat(k) = S(k)/|k|^delta,
/// delta in [0,2). S is a smooth fast-decaying envelope; the default
/// Gaussian S(k) = S0 exp(-k^2/ks^2) is normalized so that R(0) = 1 when
/// delta = 0 (S0 = 8 pi^(3/2) / ks^3).
struct MediumSpec {
  double sigma0 = 0.08;  // fluctuation amplitude (used downstream, not here)
  double delta = 0.0;    // spectral exponent, [0,2)
  double eta = 1.0;      // correlation length / wavelength, (0,1]
  SpectrumKind spectrum = SpectrumKind::gaussian;
  double ks = 2.0;       // envelope decay scale
  double S0 = -1.0;      // <0: auto-normalize (see above)
  std::uint64_t seed = 1;

  void validate() const;
  double envelope_S(double k) const;
  double spectrum_Rhat(double k) const;  // S(k)/k^delta, k > 0
  double s0_effective() const;
  std::uint64_t spec_hash() const;
};

/// One realization of V(x/(eps*eta)) sampled on a periodic grid.
struct RandomField {
  Grid3D grid;
  MediumSpec spec;
  double epsilon = 1.0;
  std::uint64_t stream_seed = 0;
  std::vector<double> values;       // real samples, size n^3
  double imag_residual_rel = 0.0;   // Hermitian-symmetry diagnostic

  double min_value() const;
  double mean() const;
  double variance() const;
};

/// Spectral synthesis of V: independent complex Gaussians per Fourier mode
/// with variance prop. to Rhat(eps*eta*k)*(eps*eta)^3, Hermitian pairs, DC
/// zeroed. Deterministic given (spec.seed, stream_salt). Throws if the grid
/// cannot resolve eps*eta or if delta is out of range.
RandomField sample_field(const MediumSpec& spec, const Grid3D& grid,
                         double epsilon, std::uint64_t stream_salt = 0);

/// Generic mean-zero stationary Gaussian field with radial spectral density
/// `density` (the continuum power spectrum); Hermitian-symmetrized, DC
/// zeroed, deterministic given stream_seed. Used by both the medium and the
/// detector-noise samplers.
std::vector<double> sample_stationary_field(
    const Grid3D& grid, const std::function<double(double)>& density,
    std::uint64_t stream_seed, double* imag_residual_rel = nullptr);

struct RadialTable {
  std::vector<double> r;
  std::vector<double> value;
  std::vector<std::size_t> count;
};

/// Unbiased radially binned periodic autocovariance, via FFT.
RadialTable correlation_estimate(const RandomField& field, int n_lags);

/// Correlation along one coordinate axis (lags 0..n/2-1), for isotropy checks.
std::vector<double> axis_correlation(const RandomField& field, int axis);

/// Radially binned estimate of the scaled power spectrum Rhat_s(k) =
/// (eps*eta)^3 * Rhat(eps*eta*k); accumulate over realizations before read().
class SpectrumAccumulator {
 public:
  SpectrumAccumulator(const Grid3D& grid, int n_bins, double k_max);
  void add(const RandomField& field);
  RadialTable read() const;          // empirical E|chat|^2 * box^3 / n^6
  RadialTable expected(const MediumSpec& spec, double epsilon) const;

 private:
  Grid3D grid_;
  int n_bins_;
  double k_max_;
  std::vector<double> sum_;
  std::vector<std::size_t> count_;  // modes*realizations per bin
  std::vector<double> ksum_;
};

}  // namespace wavecb
