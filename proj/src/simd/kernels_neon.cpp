#include "wavecb/simd.hpp"

#if defined(__ARM_NEON) || defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

// NEON (A64, float64x2) kernels. Same quadrant reduction and polynomials as
// the AVX2 TU; only the lane width differs.

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

inline void sincos2(float64x2_t x, float64x2_t& s_out, float64x2_t& c_out) {
  const float64x2_t two_over_pi = vdupq_n_f64(0.63661977236758134308);
  float64x2_t k = vrndnq_f64(vmulq_f64(x, two_over_pi));
  const float64x2_t pio2_1 = vdupq_n_f64(1.57079632673412561417e0);
  const float64x2_t pio2_2 = vdupq_n_f64(6.07710050650619224932e-11);
  const float64x2_t pio2_3 = vdupq_n_f64(2.02226624879595063154e-21);
  float64x2_t r = vfmsq_f64(x, k, pio2_1);
  r = vfmsq_f64(r, k, pio2_2);
  r = vfmsq_f64(r, k, pio2_3);
  const float64x2_t r2 = vmulq_f64(r, r);

  float64x2_t ps = vdupq_n_f64(1.58962301576546568060e-10);
  ps = vfmaq_f64(vdupq_n_f64(-2.50507477628578072866e-8), ps, r2);
  ps = vfmaq_f64(vdupq_n_f64(2.75573136213857245213e-6), ps, r2);
  ps = vfmaq_f64(vdupq_n_f64(-1.98412698295895385996e-4), ps, r2);
  ps = vfmaq_f64(vdupq_n_f64(8.33333333332211858878e-3), ps, r2);
  ps = vfmaq_f64(vdupq_n_f64(-1.66666666666666307295e-1), ps, r2);
  const float64x2_t sin_r = vfmaq_f64(r, vmulq_f64(ps, r2), r);

  float64x2_t pc = vdupq_n_f64(-1.13585365213876817300e-11);
  pc = vfmaq_f64(vdupq_n_f64(2.08757008419747316778e-9), pc, r2);
  pc = vfmaq_f64(vdupq_n_f64(-2.75573141792967388112e-7), pc, r2);
  pc = vfmaq_f64(vdupq_n_f64(2.48015872888517179954e-5), pc, r2);
  pc = vfmaq_f64(vdupq_n_f64(-1.38888888888730564116e-3), pc, r2);
  pc = vfmaq_f64(vdupq_n_f64(4.16666666666665929218e-2), pc, r2);
  const float64x2_t r4 = vmulq_f64(r2, r2);
  float64x2_t cos_r =
      vfmsq_f64(vdupq_n_f64(1.0), r2, vdupq_n_f64(0.5));
  cos_r = vfmaq_f64(cos_r, pc, r4);

  const int64x2_t j = vcvtnq_s64_f64(k);
  const int64x2_t one = vdupq_n_s64(1), two = vdupq_n_s64(2);
  const uint64x2_t swapm = vceqq_s64(vandq_s64(j, one), one);
  const uint64x2_t ssinm = vceqq_s64(vandq_s64(j, two), two);
  const uint64x2_t scosm =
      vceqq_s64(vandq_s64(vaddq_s64(j, one), two), two);

  float64x2_t s = vbslq_f64(swapm, cos_r, sin_r);
  float64x2_t c = vbslq_f64(swapm, sin_r, cos_r);
  const uint64x2_t signbit = vdupq_n_u64(0x8000000000000000ull);
  s = vreinterpretq_f64_u64(
      veorq_u64(vreinterpretq_u64_f64(s), vandq_u64(ssinm, signbit)));
  c = vreinterpretq_f64_u64(
      veorq_u64(vreinterpretq_u64_f64(c), vandq_u64(scosm, signbit)));
  s_out = s;
  c_out = c;
}

void sincos_neon(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t sv, cv;
    sincos2(vld1q_f64(x + i), sv, cv);
    vst1q_f64(s + i, sv);
    vst1q_f64(c + i, cv);
  }
  if (i < n) sincos_scalar(x + i, s + i, c + i, n - i);
}

void cos_scale_neon(std::size_t n, const double* absk, double t,
                    std::complex<double>* field) {
  double* f = reinterpret_cast<double*>(field);
  const float64x2_t tv = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t sv, cv;
    sincos2(vmulq_f64(vld1q_f64(absk + i), tv), sv, cv);
    const float64x2_t w0 = vdupq_laneq_f64(cv, 0);
    const float64x2_t w1 = vdupq_laneq_f64(cv, 1);
    vst1q_f64(f + 2 * i, vmulq_f64(vld1q_f64(f + 2 * i), w0));
    vst1q_f64(f + 2 * i + 2, vmulq_f64(vld1q_f64(f + 2 * i + 2), w1));
  }
  if (i < n) cos_scale_scalar(n - i, absk + i, t, field + i);
}

void born_accumulate_neon(std::size_t n, const double* absk, double w,
                          double tau, const std::complex<double>* src,
                          std::complex<double>* accP,
                          std::complex<double>* accPt,
                          std::complex<double>* accA) {
  // Lane bookkeeping dominates here; delegate to the reference loop on the
  // rare small-a path by handling whole blocks scalar when any lane is tiny.
  const double* sp = reinterpret_cast<const double*>(src);
  double* pp = reinterpret_cast<double*>(accP);
  double* pt = reinterpret_cast<double*>(accPt);
  double* pa = reinterpret_cast<double*>(accA);
  const float64x2_t wv = vdupq_n_f64(w);
  const float64x2_t tv = vdupq_n_f64(tau);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    if (absk[i] < 1e-12 || absk[i + 1] < 1e-12) {
      born_accumulate_scalar(2, absk + i, w, tau, src + i, accP + i,
                             accPt + i, accA + i);
      continue;
    }
    const float64x2_t a = vld1q_f64(absk + i);
    float64x2_t sv, cv;
    sincos2(vmulq_f64(a, tv), sv, cv);
    const float64x2_t inva = vdivq_f64(one, a);
    const float64x2_t wp = vmulq_f64(wv, vmulq_f64(sv, inva));
    const float64x2_t wt = vmulq_f64(wv, cv);
    const float64x2_t wa = vmulq_f64(
        wv, vmulq_f64(vsubq_f64(one, cv), vmulq_f64(inva, inva)));
    for (int lane = 0; lane < 2; ++lane) {
      const double wpd = lane ? vgetq_lane_f64(wp, 1) : vgetq_lane_f64(wp, 0);
      const double wtd = lane ? vgetq_lane_f64(wt, 1) : vgetq_lane_f64(wt, 0);
      const double wad = lane ? vgetq_lane_f64(wa, 1) : vgetq_lane_f64(wa, 0);
      const float64x2_t sv2 = vld1q_f64(sp + 2 * (i + lane));
      vst1q_f64(pp + 2 * (i + lane),
                vfmaq_f64(vld1q_f64(pp + 2 * (i + lane)), sv2,
                          vdupq_n_f64(wpd)));
      vst1q_f64(pt + 2 * (i + lane),
                vfmaq_f64(vld1q_f64(pt + 2 * (i + lane)), sv2,
                          vdupq_n_f64(wtd)));
      vst1q_f64(pa + 2 * (i + lane),
                vfmaq_f64(vld1q_f64(pa + 2 * (i + lane)), sv2,
                          vdupq_n_f64(wad)));
    }
  }
  if (i < n)
    born_accumulate_scalar(n - i, absk + i, w, tau, src + i, accP + i,
                           accPt + i, accA + i);
}

void phase_sum_sym_neon(std::size_t n, const double* P, const double* tau,
                        std::size_t nq, const double* qmag, double* out) {
  for (std::size_t q = 0; q < nq; ++q) {
    const float64x2_t qa = vdupq_n_f64(qmag[q]);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      float64x2_t sv, cv;
      sincos2(vmulq_f64(qa, vld1q_f64(tau + i)), sv, cv);
      acc = vfmaq_f64(acc, vld1q_f64(P + i), cv);
    }
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) r += P[i] * std::cos(qmag[q] * tau[i]);
    out[q] += r;
  }
}

}  // namespace

extern const KernelTable neon_table;
const KernelTable neon_table = {
    &sincos_neon,
    &cos_scale_neon,
    &born_accumulate_neon,
    &phase_sum_sym_neon,
};

}  // namespace wavecb::simd::detail

#endif  // __ARM_NEON
