#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wavecb/simd.hpp"

using namespace wavecb;

namespace {

std::vector<simd::Path> active_paths() {
  std::vector<simd::Path> p = {simd::Path::scalar};
  if (simd::path_supported(simd::Path::avx2)) p.push_back(simd::Path::avx2);
  if (simd::path_supported(simd::Path::neon)) p.push_back(simd::Path::neon);
  return p;
}

}  // namespace

TEST_CASE("sincos equivalence across paths and argument ranges") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {1ul, 3ul, 4ul, 17ul, 1024ul}) {
    std::vector<double> x(n);
    std::uniform_real_distribution<double> span(-3000.0, 3000.0);
    for (auto& v : x) v = span(rng);
    x[0] = 0.0;
    if (n > 3) {
      x[1] = 1e-14;
      x[2] = -250.0;
    }
    std::vector<double> s_ref(n), c_ref(n);
    simd::kernels_for(simd::Path::scalar).sincos(x.data(), s_ref.data(),
                                                 c_ref.data(), n);
    for (simd::Path p : active_paths()) {
      std::vector<double> s(n), c(n);
      simd::kernels_for(p).sincos(x.data(), s.data(), c.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s[i] == doctest::Approx(s_ref[i]).epsilon(1e-13));
        CHECK(c[i] == doctest::Approx(c_ref[i]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("cos_scale equivalence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 513;
  std::vector<double> absk(n);
  for (auto& v : absk) v = 120.0 * std::abs(u(rng));
  std::vector<std::complex<double>> base(n);
  for (auto& v : base) v = {u(rng), u(rng)};

  std::vector<std::complex<double>> ref = base;
  simd::kernels_for(simd::Path::scalar).cos_scale(n, absk.data(), 0.73,
                                                  ref.data());
  for (simd::Path p : active_paths()) {
    std::vector<std::complex<double>> f = base;
    simd::kernels_for(p).cos_scale(n, absk.data(), 0.73, f.data());
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(f[i] - ref[i]) < 1e-13);
  }
}

TEST_CASE("born_accumulate equivalence incl. tiny-|k| limit lanes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 258;
  std::vector<double> absk(n);
  for (std::size_t i = 0; i < n; ++i) absk[i] = 100.0 * std::abs(u(rng));
  absk[0] = 0.0;
  absk[100] = 1e-13;
  std::vector<std::complex<double>> src(n);
  for (auto& v : src) v = {u(rng), u(rng)};

  auto run = [&](simd::Path p) {
    std::vector<std::complex<double>> accP(n), accPt(n), accA(n);
    simd::kernels_for(p).born_accumulate(n, absk.data(), 0.37, 0.62,
                                         src.data(), accP.data(),
                                         accPt.data(), accA.data());
    simd::kernels_for(p).born_accumulate(n, absk.data(), -0.11, 0.13,
                                         src.data(), accP.data(),
                                         accPt.data(), accA.data());
    return std::tuple{accP, accPt, accA};
  };
  const auto [rp, rt, ra] = run(simd::Path::scalar);
  for (simd::Path p : active_paths()) {
    const auto [ap, at, aa] = run(p);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ap[i] - rp[i]) < 1e-13);
      CHECK(std::abs(at[i] - rt[i]) < 1e-13);
      CHECK(std::abs(aa[i] - ra[i]) < 1e-13);
    }
  }
  // limit values at a = 0: weights w*tau, w, w*tau^2/2
  CHECK(rp[0].real() ==
        doctest::Approx((0.37 * 0.62 - 0.11 * 0.13) * src[0].real())
            .epsilon(1e-12));
  CHECK(rt[0].real() ==
        doctest::Approx((0.37 - 0.11) * src[0].real()).epsilon(1e-12));
  CHECK(ra[0].real() ==
        doctest::Approx((0.37 * 0.62 * 0.62 / 2 - 0.11 * 0.13 * 0.13 / 2) *
                        src[0].real())
            .epsilon(1e-12));
}

TEST_CASE("phase_sum_sym equivalence and against a direct complex sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 401, nq = 17;
  std::vector<double> P(n), tau(n), qmag(nq);
  for (auto& v : P) v = u(rng);
  for (auto& v : tau) v = 0.4 * u(rng);
  for (std::size_t q = 0; q < nq; ++q) qmag[q] = 10.0 + 2.0 * q;

  std::vector<double> ref(nq, 0.0);
  simd::kernels_for(simd::Path::scalar).phase_sum_sym(n, P.data(), tau.data(),
                                                      nq, qmag.data(),
                                                      ref.data());
  for (simd::Path p : active_paths()) {
    std::vector<double> out(nq, 0.0);
    simd::kernels_for(p).phase_sum_sym(n, P.data(), tau.data(), nq,
                                       qmag.data(), out.data());
    for (std::size_t q = 0; q < nq; ++q)
      CHECK(out[q] == doctest::Approx(ref[q]).epsilon(1e-12).scale(double(n)));
  }
  // direct complex evaluation of the folded pair sum
  for (std::size_t q = 0; q < nq; ++q) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += 0.5 * P[i] *
             (std::polar(1.0, qmag[q] * tau[i]) +
              std::polar(1.0, -qmag[q] * tau[i]));
    CHECK(acc.imag() == doctest::Approx(0.0).epsilon(1e-12).scale(double(n)));
    CHECK(acc.real() == doctest::Approx(ref[q]).epsilon(1e-12).scale(double(n)));
  }
}

TEST_CASE("dispatch reports a valid active path") {
  CHECK(simd::path_supported(simd::Path::scalar));
  const simd::Path p = simd::active_path();
  CHECK(simd::path_supported(p));
  CHECK(simd::path_name(p) != nullptr);
}
