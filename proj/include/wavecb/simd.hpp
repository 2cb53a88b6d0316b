#pragma once
#include <complex>
#include <cstddef>

namespace wavecb::simd {

enum class Path { scalar, avx2, neon };

/// Data-parallel inner-loop kernels. Every entry has a scalar reference
/// implementation; vector variants are selected at runtime and must agree
/// with the reference to near machine precision (see tests/test_simd.cpp).
struct KernelTable {
  /// s[i] = sin(x[i]), c[i] = cos(x[i]); valid for |x| <= 1e6.
  void (*sincos)(const double* x, double* s, double* c, std::size_t n);

  /// field[i] *= cos(absk[i] * t)
  void (*cos_scale)(std::size_t n, const double* absk, double t,
                    std::complex<double>* field);

  /// Accumulate one time node of the wave-kernel quadrature:
  ///   accP [i] += w * sin(a*tau)/a       * src[i]
  ///   accPt[i] += w * cos(a*tau)         * src[i]
  ///   accA [i] += w * (1-cos(a*tau))/a^2 * src[i]
  /// with a = absk[i]; the a -> 0 limits (w*tau, w, w*tau^2/2) are taken
  /// when a is tiny.
  void (*born_accumulate)(std::size_t n, const double* absk, double w,
                          double tau, const std::complex<double>* src,
                          std::complex<double>* accP,
                          std::complex<double>* accPt,
                          std::complex<double>* accA);

  /// out[q] += sum_i P[i] * cos(qmag[q] * tau[i])   for q = 0..nq-1.
  /// Used for the symmetric (offset-pair-folded) windowed Wigner sum.
  void (*phase_sum_sym)(std::size_t n, const double* P, const double* tau,
                        std::size_t nq, const double* qmag, double* out);
};

const KernelTable& kernels();
const KernelTable& kernels_for(Path p);

Path active_path();
bool path_supported(Path p);
void force_path(Path p);  // throws std::runtime_error if unsupported
const char* path_name(Path p);

}  // namespace wavecb::simd
