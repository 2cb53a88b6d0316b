#include "wavecb/medium.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavecb/rng.hpp"

namespace wavecb {

void MediumSpec::validate() const {
  if (sigma0 < 0) throw std::invalid_argument("medium: sigma0 must be >= 0");
  if (!(delta >= 0.0 && delta < 2.0))
    throw std::invalid_argument(
        "medium: delta must lie in [0,2) (transport mean free path "
        "diverges otherwise)");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("medium: eta must lie in (0,1]");
  if (!(ks > 0.0)) throw std::invalid_argument("medium: ks must be > 0");
}

double MediumSpec::s0_effective() const {
  if (S0 >= 0) return S0;  // explicit (0 gives an identically zero field)
  // auto: R(0) = 1 at delta = 0 for the Gaussian envelope.
  return 8.0 * std::pow(std::numbers::pi, 1.5) / (ks * ks * ks);
}

double MediumSpec::envelope_S(double k) const {
  const double s0 = s0_effective();
  switch (spectrum) {
    case SpectrumKind::gaussian: return s0 * std::exp(-(k * k) / (ks * ks));
    case SpectrumKind::flat: return s0;
  }
  return 0.0;
}

double MediumSpec::spectrum_Rhat(double k) const {
  if (delta == 0.0) return envelope_S(k);
  return envelope_S(k) / std::pow(k, delta);
}

std::uint64_t MediumSpec::spec_hash() const {
  char buf[192];
  std::snprintf(buf, sizeof buf, "m|%.17g|%.17g|%.17g|%d|%.17g|%.17g", sigma0,
                delta, eta, static_cast<int>(spectrum), ks, s0_effective());
  std::uint64_t h = 1469598103934665603ull;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  return h;
}

double RandomField::min_value() const {
  double m = values.empty() ? 0.0 : values[0];
  for (double v : values) m = std::min(m, v);
  return m;
}

double RandomField::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / values.size();
}

double RandomField::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (double v : values) s += (v - mu) * (v - mu);
  return s / values.size();
}

std::vector<double> sample_stationary_field(
    const Grid3D& grid, const std::function<double(double)>& density,
    std::uint64_t stream_seed, double* imag_residual_rel) {
  const int n = grid.n;
  const std::size_t N = grid.size();
  const std::vector<double> ka = grid.axis_k();

  // Mode standard deviations from the continuum spectrum:
  //   E|chat_m|^2 = n^6 * density(|k_m|) / box^3.
  const double amp0 = static_cast<double>(N) *
                      std::sqrt(1.0 / (grid.box * grid.box * grid.box));
  RngStream rng(stream_seed);

  cvec spectral(N, std::complex<double>(0.0, 0.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const int pi = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      const int pj = (n - j) % n;
      for (int k = 0; k < n; ++k, ++idx) {
        const int pk = (n - k) % n;
        const std::size_t pidx = grid.index(pi, pj, pk);
        if (pidx < idx) continue;  // partner already drawn
        if (i == 0 && j == 0 && k == 0) continue;  // DC mode stays zero
        const double kk = std::sqrt(ka[i] * ka[i] + ka[j] * ka[j] +
                                    ka[k] * ka[k]);
        const double var = density(kk);
        if (!(var > 0.0)) continue;
        const double sd = amp0 * std::sqrt(var);
        if (pidx == idx) {
          spectral[idx] = sd * rng.normal();  // self-conjugate: real
        } else {
          const std::complex<double> z(rng.normal(), rng.normal());
          spectral[idx] = sd * inv_sqrt2 * z;
          spectral[pidx] = std::conj(spectral[idx]);
        }
      }
    }
  }

  FftEngine::instance().to_real_centered(grid, spectral);
  if (imag_residual_rel) {
    double rms = 0.0;
    for (const auto& v : spectral) rms += std::norm(v);
    rms = std::sqrt(rms / N);
    *imag_residual_rel = rms > 0 ? max_abs_imag(spectral) / rms : 0.0;
  }
  return real_parts(spectral);
}

RandomField sample_field(const MediumSpec& spec, const Grid3D& grid,
                         double epsilon, std::uint64_t stream_salt) {
  spec.validate();
  if (!(epsilon > 0.0))
    throw std::invalid_argument("sample_field: epsilon must be > 0");
  const double corr = epsilon * spec.eta;
  const double h = grid.spacing();
  if (spec.spectrum != SpectrumKind::flat && h > corr / 2.0 + 1e-12) {
    throw std::invalid_argument(
        "sample_field: grid too coarse for eps*eta = " + std::to_string(corr) +
        " (spacing " + std::to_string(h) +
        " must give >= 2 samples per correlation length)");
  }

  RandomField f;
  f.grid = grid;
  f.spec = spec;
  f.epsilon = epsilon;
  f.stream_seed = mix_seed({spec.seed, stream_salt, 0x6d656469756dull});
  const double scale3 = corr * corr * corr;
  f.values = sample_stationary_field(
      grid,
      [&](double kk) { return scale3 * spec.spectrum_Rhat(corr * kk); },
      f.stream_seed, &f.imag_residual_rel);
  return f;
}

namespace {

// Circular autocovariance C(lag) = mean over sites of V(x)V(x+lag), via FFT.
std::vector<double> autocovariance(const RandomField& field) {
  const Grid3D& g = field.grid;
  const std::size_t N = g.size();
  cvec a(N);
  for (std::size_t i = 0; i < N; ++i) a[i] = field.values[i];
  FftEngine& fft = FftEngine::instance();
  fft.forward_inplace(g, a);
  for (auto& v : a) v = std::norm(v);
  fft.backward_inplace(g, a);
  const double norm = 1.0 / (static_cast<double>(N) * N);
  std::vector<double> c(N);
  for (std::size_t i = 0; i < N; ++i) c[i] = a[i].real() * norm;
  return c;
}

}  // namespace

RadialTable correlation_estimate(const RandomField& field, int n_lags) {
  const Grid3D& g = field.grid;
  const std::vector<double> c = autocovariance(field);

  RadialTable t;
  t.r.assign(n_lags, 0.0);
  t.value.assign(n_lags, 0.0);
  t.count.assign(n_lags, 0);
  std::vector<double> rsum(n_lags, 0.0);
  const double rmax = 0.5 * g.box;
  const double h = g.spacing();
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const int si = g.freq_index(i);  // min-image lag index
    for (int j = 0; j < n; ++j) {
      const int sj = g.freq_index(j);
      for (int k = 0; k < n; ++k, ++idx) {
        const int sk = g.freq_index(k);
        const double r = h * std::sqrt(double(si) * si + double(sj) * sj +
                                       double(sk) * sk);
        if (r >= rmax) continue;
        const int b = std::min(n_lags - 1,
                               static_cast<int>(r / rmax * n_lags));
        t.value[b] += c[idx];
        rsum[b] += r;
        t.count[b] += 1;
      }
    }
  }
  for (int b = 0; b < n_lags; ++b)
    if (t.count[b]) {
      t.value[b] /= t.count[b];
      t.r[b] = rsum[b] / t.count[b];
    }
  return t;
}

std::vector<double> axis_correlation(const RandomField& field, int axis) {
  const Grid3D& g = field.grid;
  const std::vector<double> c = autocovariance(field);
  const int n = g.n;
  std::vector<double> out(n / 2);
  for (int lag = 0; lag < n / 2; ++lag) {
    if (axis == 0)
      out[lag] = c[g.index(lag, 0, 0)];
    else if (axis == 1)
      out[lag] = c[g.index(0, lag, 0)];
    else
      out[lag] = c[g.index(0, 0, lag)];
  }
  return out;
}

SpectrumAccumulator::SpectrumAccumulator(const Grid3D& grid, int n_bins,
                                         double k_max)
    : grid_(grid), n_bins_(n_bins), k_max_(k_max) {
  sum_.assign(n_bins, 0.0);
  count_.assign(n_bins, 0);
  ksum_.assign(n_bins, 0.0);
}

void SpectrumAccumulator::add(const RandomField& field) {
  if (!(field.grid == grid_))
    throw std::invalid_argument("SpectrumAccumulator: grid mismatch");
  const std::size_t N = grid_.size();
  cvec a(N);
  for (std::size_t i = 0; i < N; ++i) a[i] = field.values[i];
  FftEngine::instance().to_spectral_centered(grid_, a);
  const double b3 = grid_.box * grid_.box * grid_.box;
  const double norm = b3 / (static_cast<double>(N) * N);
  const std::vector<double> ka = grid_.axis_k();
  const int n = grid_.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        const double kk = std::sqrt(ka[i] * ka[i] + ka[j] * ka[j] +
                                    ka[k] * ka[k]);
        if (kk <= 0.0 || kk >= k_max_) continue;
        const int b = static_cast<int>(kk / k_max_ * n_bins_);
        sum_[b] += std::norm(a[idx]) * norm;
        ksum_[b] += kk;
        count_[b] += 1;
      }
}

RadialTable SpectrumAccumulator::read() const {
  RadialTable t;
  t.r.assign(n_bins_, 0.0);
  t.value.assign(n_bins_, 0.0);
  t.count.assign(n_bins_, 0);
  for (int b = 0; b < n_bins_; ++b) {
    if (!count_[b]) continue;
    t.r[b] = ksum_[b] / count_[b];
    t.value[b] = sum_[b] / count_[b];
    t.count[b] = count_[b];
  }
  return t;
}

RadialTable SpectrumAccumulator::expected(const MediumSpec& spec,
                                          double epsilon) const {
  RadialTable t = read();
  const double corr = epsilon * spec.eta;
  const double scale3 = corr * corr * corr;
  for (int b = 0; b < n_bins_; ++b) {
    if (!t.count[b]) continue;
    t.value[b] = scale3 * spec.spectrum_Rhat(corr * t.r[b]);
  }
  return t;
}

}  // namespace wavecb
