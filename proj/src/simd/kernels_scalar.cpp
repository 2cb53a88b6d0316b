#include "wavecb/simd.hpp"

#include <cmath>

// Reference kernels. Plain loops over libm; the vector variants are tested
// against these.

namespace wavecb::simd::detail {

void sincos_scalar(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

void cos_scale_scalar(std::size_t n, const double* absk, double t,
                      std::complex<double>* field) {
  for (std::size_t i = 0; i < n; ++i) field[i] *= std::cos(absk[i] * t);
}

void born_accumulate_scalar(std::size_t n, const double* absk, double w,
                            double tau, const std::complex<double>* src,
                            std::complex<double>* accP,
                            std::complex<double>* accPt,
                            std::complex<double>* accA) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = absk[i];
    double wp, wt, wa;
    if (a < 1e-12) {
      wp = w * tau;
      wt = w;
      wa = w * tau * tau * 0.5;
    } else {
      const double th = a * tau;
      const double sn = std::sin(th), cs = std::cos(th);
      wp = w * sn / a;
      wt = w * cs;
      wa = w * (1.0 - cs) / (a * a);
    }
    accP[i] += wp * src[i];
    accPt[i] += wt * src[i];
    accA[i] += wa * src[i];
  }
}

void phase_sum_sym_scalar(std::size_t n, const double* P, const double* tau,
                          std::size_t nq, const double* qmag, double* out) {
  for (std::size_t q = 0; q < nq; ++q) {
    const double qa = qmag[q];
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += P[i] * std::cos(qa * tau[i]);
    out[q] += acc;
  }
}

extern const KernelTable scalar_table;
const KernelTable scalar_table = {
    &sincos_scalar,
    &cos_scale_scalar,
    &born_accumulate_scalar,
    &phase_sum_sym_scalar,
};

}  // namespace wavecb::simd::detail
