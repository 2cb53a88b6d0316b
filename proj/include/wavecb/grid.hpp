#pragma once
#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <vector>

namespace wavecb {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  Vec3 normalized() const;
};

/// Allocator backed by fftw_malloc so vectors meet FFTW's SIMD alignment.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(fftw_malloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) { fftw_free(p); }
  bool operator==(const FftwAllocator&) const { return true; }
  bool operator!=(const FftwAllocator&) const { return false; }
};

using cvec = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

/// Periodic cubic grid, box centered at the origin: x_i = -box/2 + i*h.
/// Spectral arrays use the "centered" convention: a field equals
/// (1/n^3) sum_m chat_m exp(i k_m . x) with k_m = 2*pi*s(m)/box and s(m)
/// the signed frequency index.
struct Grid3D {
  int n = 0;
  double box = 0.0;

  Grid3D() = default;
  Grid3D(int n_, double box_);

  double spacing() const { return box / n; }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  double coord(int i) const { return -0.5 * box + i * spacing(); }
  Vec3 position(int i, int j, int k) const {
    return {coord(i), coord(j), coord(k)};
  }
  int freq_index(int i) const { return i <= n / 2 ? i : i - n; }
  double k_axis(int i) const;
  double k_nyquist() const;

  std::vector<double> axis_k() const;       // n entries
  std::vector<double> make_abs_k() const;   // n^3 entries
  bool operator==(const Grid3D& o) const { return n == o.n && box == o.box; }
};

/// Process-wide FFT engine; plans are cached per grid size and reused.
class FftEngine {
 public:
  static FftEngine& instance();
  void forward_inplace(const Grid3D& g, cvec& a);   // unnormalized DFT
  void backward_inplace(const Grid3D& g, cvec& a);  // unnormalized inverse

  /// Real field -> centered spectral coefficients chat_m (in place).
  void to_spectral_centered(const Grid3D& g, cvec& a);
  /// Centered spectral -> real-space samples (in place, normalized).
  void to_real_centered(const Grid3D& g, cvec& a);

 private:
  FftEngine() = default;
  void* plan_for(const Grid3D& g, int sign);
};

/// Multiply by (-1)^(i+j+k); converts between DFT and centered phasing.
void apply_parity(const Grid3D& g, cvec& a);

/// Evaluate the field of a centered spectral array on the lattice shifted
/// by `shift` (one extra FFT). Output is real parts, size n^3.
std::vector<double> shifted_real(const Grid3D& g, const cvec& spec,
                                 const Vec3& shift);

double max_abs_imag(const cvec& a);
std::vector<double> real_parts(const cvec& a);

}  // namespace wavecb
