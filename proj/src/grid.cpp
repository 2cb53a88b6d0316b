#include "wavecb/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wavecb {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
  const double r = norm();
  if (r == 0.0) throw std::invalid_argument("normalized(): zero vector");
  return {x / r, y / r, z / r};
}

Grid3D::Grid3D(int n_, double box_) : n(n_), box(box_) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("Grid3D: n must be even and >= 8");
  if (!(box > 0.0)) throw std::invalid_argument("Grid3D: box must be > 0");
}

double Grid3D::k_axis(int i) const {
  return 2.0 * std::numbers::pi * freq_index(i) / box;
}

double Grid3D::k_nyquist() const { return std::numbers::pi / spacing(); }

std::vector<double> Grid3D::axis_k() const {
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = k_axis(i);
  return k;
}

std::vector<double> Grid3D::make_abs_k() const {
  const std::vector<double> ka = axis_k();
  std::vector<double> out(size());
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double kx2 = ka[i] * ka[i];
    for (int j = 0; j < n; ++j) {
      const double kxy2 = kx2 + ka[j] * ka[j];
      for (int k = 0; k < n; ++k)
        out[idx++] = std::sqrt(kxy2 + ka[k] * ka[k]);
    }
  }
  return out;
}

namespace {
std::mutex g_plan_mutex;
std::map<std::pair<int, int>, fftw_plan> g_plans;
}  // namespace

FftEngine& FftEngine::instance() {
  static FftEngine e;
  return e;
}

void* FftEngine::plan_for(const Grid3D& g, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(g.n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  fftw_complex* buf =
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g.size()));
  fftw_plan p = fftw_plan_dft_3d(g.n, g.n, g.n, buf, buf, sign, FFTW_MEASURE);
  fftw_free(buf);
  g_plans.emplace(key, p);
  return p;
}

void FftEngine::forward_inplace(const Grid3D& g, cvec& a) {
  if (a.size() != g.size()) throw std::invalid_argument("fft: size mismatch");
  fftw_plan p = static_cast<fftw_plan>(plan_for(g, FFTW_FORWARD));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(a.data()),
                   reinterpret_cast<fftw_complex*>(a.data()));
}

void FftEngine::backward_inplace(const Grid3D& g, cvec& a) {
  if (a.size() != g.size()) throw std::invalid_argument("fft: size mismatch");
  fftw_plan p = static_cast<fftw_plan>(plan_for(g, FFTW_BACKWARD));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(a.data()),
                   reinterpret_cast<fftw_complex*>(a.data()));
}

void apply_parity(const Grid3D& g, cvec& a) {
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx)
        if ((i + j + k) & 1) a[idx] = -a[idx];
}

void FftEngine::to_spectral_centered(const Grid3D& g, cvec& a) {
  forward_inplace(g, a);
  apply_parity(g, a);
}

void FftEngine::to_real_centered(const Grid3D& g, cvec& a) {
  apply_parity(g, a);
  backward_inplace(g, a);
  const double s = 1.0 / static_cast<double>(g.size());
  for (auto& v : a) v *= s;
}

std::vector<double> shifted_real(const Grid3D& g, const cvec& spec,
                                 const Vec3& shift) {
  const int n = g.n;
  std::vector<std::complex<double>> phx(n), phy(n), phz(n);
  for (int i = 0; i < n; ++i) {
    const double k = g.k_axis(i);
    phx[i] = std::polar(1.0, k * shift.x);
    phy[i] = std::polar(1.0, k * shift.y);
    phz[i] = std::polar(1.0, k * shift.z);
  }
  cvec a(spec.begin(), spec.end());
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::complex<double> pij = phx[i] * phy[j];
      for (int k = 0; k < n; ++k, ++idx) a[idx] *= pij * phz[k];
    }
  FftEngine::instance().to_real_centered(g, a);
  return real_parts(a);
}

double max_abs_imag(const cvec& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v.imag()));
  return m;
}

std::vector<double> real_parts(const cvec& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

}  // namespace wavecb
