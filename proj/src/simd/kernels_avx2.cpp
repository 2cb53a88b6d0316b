#include "wavecb/simd.hpp"

#include <immintrin.h>

#include <cmath>

// AVX2+FMA kernels. Compiled with -mavx2 -mfma in its own TU; only reached
// through the dispatch table after a cpuid check.

namespace wavecb::simd::detail {

void sincos_scalar(const double*, double*, double*, std::size_t);
void cos_scale_scalar(std::size_t, const double*, double,
                      std::complex<double>*);
void born_accumulate_scalar(std::size_t, const double*, double, double,
                            const std::complex<double>*,
                            std::complex<double>*, std::complex<double>*,
                            std::complex<double>*);
void phase_sum_sym_scalar(std::size_t, const double*, const double*,
                          std::size_t, const double*, double*);

namespace {

// Quadrant-reduced sincos, cephes polynomials. |x| <= ~1e6 keeps the
// 3-term pi/2 reduction well below 1 ulp of the result.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d pio2_1 = _mm256_set1_pd(1.57079632673412561417e0);
  const __m256d pio2_2 = _mm256_set1_pd(6.07710050650619224932e-11);
  const __m256d pio2_3 = _mm256_set1_pd(2.02226624879595063154e-21);
  __m256d r = _mm256_fnmadd_pd(k, pio2_1, x);
  r = _mm256_fnmadd_pd(k, pio2_2, r);
  r = _mm256_fnmadd_pd(k, pio2_3, r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58962301576546568060e-10);
  ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-2.50507477628578072866e-8));
  ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(2.75573136213857245213e-6));
  ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-1.98412698295895385996e-4));
  ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(8.33333333332211858878e-3));
  ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-1.66666666666666307295e-1));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(ps, r2), r, r);

  __m256d pc = _mm256_set1_pd(-1.13585365213876817300e-11);
  pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(2.08757008419747316778e-9));
  pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(-2.75573141792967388112e-7));
  pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(2.48015872888517179954e-5));
  pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(-1.38888888888730564116e-3));
  pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(4.16666666666665929218e-2));
  const __m256d r4 = _mm256_mul_pd(r2, r2);
  const __m256d cos_r =
      _mm256_add_pd(_mm256_fnmadd_pd(r2, _mm256_set1_pd(0.5),
                                     _mm256_set1_pd(1.0)),
                    _mm256_mul_pd(pc, r4));

  const __m128i j = _mm256_cvtpd_epi32(k);
  const __m128i one = _mm_set1_epi32(1), two = _mm_set1_epi32(2);
  const __m128i swap32 = _mm_cmpeq_epi32(_mm_and_si128(j, one), one);
  const __m128i ssin32 =
      _mm_cmpeq_epi32(_mm_and_si128(j, two), two);
  const __m128i scos32 =
      _mm_cmpeq_epi32(_mm_and_si128(_mm_add_epi32(j, one), two), two);
  const __m256d swapm = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(swap32));
  const __m256d ssinm = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(ssin32));
  const __m256d scosm = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(scos32));

  __m256d s = _mm256_blendv_pd(sin_r, cos_r, swapm);
  __m256d c = _mm256_blendv_pd(cos_r, sin_r, swapm);
  const __m256d signbit = _mm256_set1_pd(-0.0);
  s_out = _mm256_xor_pd(s, _mm256_and_pd(ssinm, signbit));
  c_out = _mm256_xor_pd(c, _mm256_and_pd(scosm, signbit));
}

// {w0,w1,w2,w3} -> {w0,w0,w1,w1}, {w2,w2,w3,w3} for interleaved complex.
inline void expand_pairs(__m256d w, __m256d& lo, __m256d& hi) {
  lo = _mm256_permute4x64_pd(w, 0x50);
  hi = _mm256_permute4x64_pd(w, 0xFA);
}

void sincos_avx2(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sv, cv;
    sincos4(_mm256_loadu_pd(x + i), sv, cv);
    _mm256_storeu_pd(s + i, sv);
    _mm256_storeu_pd(c + i, cv);
  }
  if (i < n) sincos_scalar(x + i, s + i, c + i, n - i);
}

void cos_scale_avx2(std::size_t n, const double* absk, double t,
                    std::complex<double>* field) {
  double* f = reinterpret_cast<double*>(field);
  const __m256d tv = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sv, cv;
    sincos4(_mm256_mul_pd(_mm256_loadu_pd(absk + i), tv), sv, cv);
    __m256d lo, hi;
    expand_pairs(cv, lo, hi);
    _mm256_storeu_pd(f + 2 * i,
                     _mm256_mul_pd(_mm256_loadu_pd(f + 2 * i), lo));
    _mm256_storeu_pd(f + 2 * i + 4,
                     _mm256_mul_pd(_mm256_loadu_pd(f + 2 * i + 4), hi));
  }
  if (i < n) cos_scale_scalar(n - i, absk + i, t, field + i);
}

void born_accumulate_avx2(std::size_t n, const double* absk, double w,
                          double tau, const std::complex<double>* src,
                          std::complex<double>* accP,
                          std::complex<double>* accPt,
                          std::complex<double>* accA) {
  const double* sp = reinterpret_cast<const double*>(src);
  double* pp = reinterpret_cast<double*>(accP);
  double* pt = reinterpret_cast<double*>(accPt);
  double* pa = reinterpret_cast<double*>(accA);
  const __m256d wv = _mm256_set1_pd(w);
  const __m256d tv = _mm256_set1_pd(tau);
  const __m256d tiny = _mm256_set1_pd(1e-12);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(absk + i);
    __m256d sv, cv;
    sincos4(_mm256_mul_pd(a, tv), sv, cv);
    const __m256d small = _mm256_cmp_pd(a, tiny, _CMP_LT_OQ);
    const __m256d asafe = _mm256_blendv_pd(a, one, small);
    const __m256d inva = _mm256_div_pd(one, asafe);
    __m256d wp = _mm256_mul_pd(wv, _mm256_mul_pd(sv, inva));
    __m256d wt = _mm256_mul_pd(wv, cv);
    __m256d wa = _mm256_mul_pd(
        wv, _mm256_mul_pd(_mm256_sub_pd(one, cv),
                          _mm256_mul_pd(inva, inva)));
    wp = _mm256_blendv_pd(wp, _mm256_mul_pd(wv, tv), small);
    wt = _mm256_blendv_pd(wt, wv, small);
    wa = _mm256_blendv_pd(
        wa,
        _mm256_mul_pd(wv, _mm256_mul_pd(tv, _mm256_mul_pd(
                                                tv, _mm256_set1_pd(0.5)))),
        small);
    const __m256d s0 = _mm256_loadu_pd(sp + 2 * i);
    const __m256d s1 = _mm256_loadu_pd(sp + 2 * i + 4);
    __m256d lo, hi;
    expand_pairs(wp, lo, hi);
    _mm256_storeu_pd(pp + 2 * i,
                     _mm256_fmadd_pd(lo, s0, _mm256_loadu_pd(pp + 2 * i)));
    _mm256_storeu_pd(
        pp + 2 * i + 4,
        _mm256_fmadd_pd(hi, s1, _mm256_loadu_pd(pp + 2 * i + 4)));
    expand_pairs(wt, lo, hi);
    _mm256_storeu_pd(pt + 2 * i,
                     _mm256_fmadd_pd(lo, s0, _mm256_loadu_pd(pt + 2 * i)));
    _mm256_storeu_pd(
        pt + 2 * i + 4,
        _mm256_fmadd_pd(hi, s1, _mm256_loadu_pd(pt + 2 * i + 4)));
    expand_pairs(wa, lo, hi);
    _mm256_storeu_pd(pa + 2 * i,
                     _mm256_fmadd_pd(lo, s0, _mm256_loadu_pd(pa + 2 * i)));
    _mm256_storeu_pd(
        pa + 2 * i + 4,
        _mm256_fmadd_pd(hi, s1, _mm256_loadu_pd(pa + 2 * i + 4)));
  }
  if (i < n)
    born_accumulate_scalar(n - i, absk + i, w, tau, src + i, accP + i,
                           accPt + i, accA + i);
}

void phase_sum_sym_avx2(std::size_t n, const double* P, const double* tau,
                        std::size_t nq, const double* qmag, double* out) {
  for (std::size_t q = 0; q < nq; ++q) {
    const __m256d qa = _mm256_set1_pd(qmag[q]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      __m256d sv, cv;
      sincos4(_mm256_mul_pd(qa, _mm256_loadu_pd(tau + i)), sv, cv);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(P + i), cv, acc);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, acc);
    double r = tmp[0] + tmp[1] + tmp[2] + tmp[3];
    for (; i < n; ++i) r += P[i] * std::cos(qmag[q] * tau[i]);
    out[q] += r;
  }
}

}  // namespace

extern const KernelTable avx2_table;
const KernelTable avx2_table = {
    &sincos_avx2,
    &cos_scale_avx2,
    &born_accumulate_avx2,
    &phase_sum_sym_avx2,
};

}  // namespace wavecb::simd::detail
