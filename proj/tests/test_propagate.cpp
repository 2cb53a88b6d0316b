#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wavecb/propagate.hpp"
#include "wavecb/quadrature.hpp"

using namespace wavecb;

namespace {

SourceSpec default_source() {
  SourceSpec s;
  s.k0 = 2.0;
  s.epsilon = 0.1;
  s.mu = 2.0;
  return s;
}

// spectral array with a single cosine mode cos(k_m . x)
cvec cosine_mode_spectrum(const Grid3D& g, int mx, int my, int mz) {
  cvec a(g.size(), {0.0, 0.0});
  const double w = g.size() / 2.0;
  a[g.index((mx % g.n + g.n) % g.n, (my % g.n + g.n) % g.n,
            (mz % g.n + g.n) % g.n)] = w;
  a[g.index(((-mx) % g.n + g.n) % g.n, ((-my) % g.n + g.n) % g.n,
            ((-mz) % g.n + g.n) % g.n)] = w;
  return a;
}

}  // namespace

TEST_CASE("two-frequency kernel matches direct quadrature incl. resonance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 60.0);
  for (int i = 0; i < 40; ++i) {
    const double a = u(rng);
    double b = u(rng);
    if (i % 5 == 0) b = a * (1.0 + 3e-7);  // near-resonant
    if (i % 7 == 0) b = a;                 // exactly resonant
    const double t = 0.3 + 0.02 * i;
    const QuadResult q = integrate_oscillatory(
        [&](double s) { return std::sin(a * (t - s)) * std::cos(b * s); },
        0.0, t, a + b, 1e-13);
    REQUIRE(q.converged);
    CHECK(wave_time_kernel(a, b, t) ==
          doctest::Approx(q.value).epsilon(1e-9).scale(t));
    const QuadResult qi = integrate_oscillatory(
        [&](double s) { return wave_time_kernel(a, b, s); }, 0.0, t, a + b,
        1e-12);
    CHECK(wave_time_kernel_integral(a, b, t) ==
          doctest::Approx(qi.value).epsilon(1e-6).scale(t));
  }
}

TEST_CASE("ballistic at t=0 is the identity with zero velocity") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  const cvec p0 = source_spectrum(s, g);
  const FieldSet f = propagate_free(p0, g, 0.0);
  for (std::size_t i = 0; i < p0.size(); ++i) {
    CHECK(std::abs(f.p[i] - p0[i]) == 0.0);
    CHECK(std::abs(f.pt[i]) == 0.0);
  }
}

TEST_CASE("single mode propagates as the d'Alembert eigenmode") {
  Grid3D g(32, 4.0);
  const cvec mode = cosine_mode_spectrum(g, 3, 1, 0);
  const double kk = std::sqrt(g.k_axis(3) * g.k_axis(3) +
                              g.k_axis(1) * g.k_axis(1));
  const double t = 0.77;
  FieldSet f = propagate_free(mode, g, t);
  FftEngine::instance().to_real_centered(g, f.p);
  for (int i = 0; i < g.n; i += 5)
    for (int j = 0; j < g.n; j += 7) {
      const Vec3 x = g.position(i, j, 11);
      const double expect = std::cos(kk * t) *
                            std::cos(g.k_axis(3) * x.x + g.k_axis(1) * x.y);
      CHECK(f.p[g.index(i, j, 11)].real() ==
            doctest::Approx(expect).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("free propagation conserves the (cos,sin) spectral energy") {
  Grid3D g(48, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 1.0 / 8;
  const cvec p0 = source_spectrum(s, g);
  const double e0 = propagation_energy(propagate_free(p0, g, 0.0));
  for (double t : {0.31, 1.0}) {
    const double et = propagation_energy(propagate_free(p0, g, t));
    CHECK(et == doctest::Approx(e0).epsilon(1e-10));
  }
}

TEST_CASE("band-limited source refocuses on the unit shell at t=1") {
  Grid3D g(64, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 1.0 / 8;
  FieldSet f = ballistic(s, 1.0, g);
  FftEngine::instance().to_real_centered(g, f.p);
  const int nb = 40;
  std::vector<double> bins(nb, 0.0);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r = g.position(i, j, k).norm();
        if (r >= 2.0) continue;
        bins[static_cast<int>(r / 2.0 * nb)] +=
            std::norm(f.p[g.index(i, j, k)]);
      }
  int bpk = 0;
  for (int b = 1; b < nb; ++b)
    if (bins[b] > bins[bpk]) bpk = b;
  const double rpk = (bpk + 0.5) * 2.0 / nb;
  CHECK(std::abs(rpk - 1.0) < s.epsilon * s.mu);
}

TEST_CASE("mean field is the ballistic field damped by exp(-Sigma t/2)") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  const FieldSet b = ballistic(s, 1.0, g);
  const FieldSet m0 = mean_field(s, 1.0, g, 0.0);
  for (std::size_t i = 0; i < b.p.size(); i += 97)
    CHECK(std::abs(m0.p[i] - b.p[i]) == 0.0);
  const double Sigma = 2.0;  // Sigma*T = 2 -> uniform ratio e^-1
  const FieldSet m = mean_field(s, 1.0, g, Sigma);
  for (std::size_t i = 0; i < b.p.size(); i += 97) {
    CHECK(std::abs(m.p[i] - std::exp(-1.0) * b.p[i]) <=
          1e-15 * std::abs(b.p[i]));
    CHECK(std::abs(m.pt[i] - std::exp(-1.0) * b.pt[i]) <=
          1e-15 * std::abs(b.pt[i]));
  }
}

TEST_CASE("born oracle: single medium mode times single source mode") {
  Grid3D g(32, 4.0);
  const double t = 1.0, sigma0 = 0.13;
  // source cos(ks.x), medium cos(q.x)
  const cvec p0 = cosine_mode_spectrum(g, 0, 4, 0);
  std::vector<double> med(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Vec3 x = g.position(i, j, k);
        med[g.index(i, j, k)] = std::cos(g.k_axis(2) * x.x +
                                         g.k_axis(3) * x.z);
      }
  const double b = g.k_axis(4);  // |k_src|
  FieldSet f = born_field_from_spectrum(p0, med, sigma0, t, g, 0.0,
                                        1.3 * b);
  FftEngine::instance().to_real_centered(g, f.p);

  // closed-form beat solution of the driven wave equation
  const Vec3 ks{0.0, g.k_axis(4), 0.0};
  const Vec3 q{g.k_axis(2), 0.0, g.k_axis(3)};
  const Vec3 kp = q + ks, km = q - ks;
  const double ap = kp.norm(), am = km.norm();
  auto expect = [&](const Vec3& x) {
    return sigma0 * b * b / 2.0 *
           (wave_time_kernel(ap, b, t) / ap * std::cos(kp.dot(x)) +
            wave_time_kernel(am, b, t) / am * std::cos(km.dot(x)));
  };
  double maxv = 0.0;
  for (std::size_t i = 0; i < f.p.size(); ++i)
    maxv = std::max(maxv, std::abs(f.p[i].real()));
  REQUIRE(maxv > 0);
  for (int i = 0; i < g.n; i += 5)
    for (int j = 0; j < g.n; j += 6)
      for (int k = 0; k < g.n; k += 7) {
        const Vec3 x = g.position(i, j, k);
        CHECK(std::abs(f.p[g.index(i, j, k)].real() - expect(x)) <
              1e-8 * maxv);
      }
}

TEST_CASE("born is exactly linear in sigma0 and factorizes the damping") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  MediumSpec m;
  m.seed = 9;
  const RandomField V = sample_field(m, g, s.epsilon);

  MediumSpec m1 = m;
  m1.sigma0 = 0.05;
  MediumSpec m2 = m;
  m2.sigma0 = 0.10;
  const FieldSet f1 = born_field(s, V, m1, 1.0, g, 0.0);
  const FieldSet f2 = born_field(s, V, m2, 1.0, g, 0.0);
  for (std::size_t i = 0; i < f1.p.size(); i += 31)
    CHECK(std::abs(f2.p[i] - 2.0 * f1.p[i]) == 0.0);  // exact doubling

  const double Sigma = 0.8;
  const FieldSet fd = born_field(s, V, m1, 1.0, g, Sigma);
  const double damp = std::exp(-0.5 * Sigma);
  for (std::size_t i = 0; i < f1.p.size(); i += 31)
    CHECK(std::abs(fd.p[i] - damp * f1.p[i]) <=
          1e-14 * std::abs(f1.p[i]) + 1e-300);
}

TEST_CASE("born vanishes for sigma0 = 0 and rejects non-positive media") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  MediumSpec m;
  const RandomField V = sample_field(m, g, s.epsilon);
  MediumSpec z = m;
  z.sigma0 = 0.0;
  const FieldSet f = born_field(s, V, z, 1.0, g, 0.0);
  for (const auto& v : f.p) CHECK(std::abs(v) == 0.0);
  MediumSpec big = m;
  big.sigma0 = 0.5;  // 1 + sigma0 V dips below zero for a unit-variance V
  CHECK_THROWS(born_field(s, V, big, 1.0, g, 0.0));
}

TEST_CASE("born ensemble mean vanishes within standard errors") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  MediumSpec m;
  m.sigma0 = 0.1;
  const int R = 24;
  std::vector<std::vector<double>> samples;
  std::vector<std::size_t> picks;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        picks.push_back(g.index(g.n / 2 + 2 + i * 2, g.n / 2 - 3 + j * 2,
                                g.n / 2 - 3 + k * 2));
  for (int r = 0; r < R; ++r) {
    const RandomField V = sample_field(m, g, s.epsilon, r);
    FieldSet f = born_field(s, V, m, 1.0, g, 0.0);
    FftEngine::instance().to_real_centered(g, f.p);
    std::vector<double> row;
    for (std::size_t p : picks) row.push_back(f.p[p].real());
    samples.push_back(row);
  }
  int exceed = 0;
  for (std::size_t c = 0; c < picks.size(); ++c) {
    double mean = 0, ss = 0;
    for (int r = 0; r < R; ++r) mean += samples[r][c];
    mean /= R;
    for (int r = 0; r < R; ++r)
      ss += (samples[r][c] - mean) * (samples[r][c] - mean);
    const double se = std::sqrt(ss / (R - 1) / R);
    if (std::abs(mean) > 3.0 * se) ++exceed;
  }
  CHECK(exceed <= 4);  // ~0.3% expected rate over 64 samples
}

TEST_CASE("detector noise: amplitude, determinism, independence") {
  Grid3D g(64, 4.0);
  const double eps = 1.0 / 8;
  NoiseSpec zero;
  const FieldSet fz = detector_noise(zero, eps, g);
  for (const auto& v : fz.p) CHECK(std::abs(v) == 0.0);

  NoiseSpec ns;
  ns.sigma_n = 0.02;
  ns.seed = 31;
  CHECK_THROWS(detector_noise(ns, 1.0 / 40, g));  // grid too coarse for eps

  double var_p = 0.0, var_v = 0.0;
  const int R = 6;
  for (int r = 0; r < R; ++r) {
    NoiseSpec nr = ns;
    nr.seed = 31 + r;
    FieldSet f = detector_noise(nr, eps, g);
    cvec pr = f.p;
    FftEngine::instance().to_real_centered(g, pr);
    cvec vr = f.v[1];
    FftEngine::instance().to_real_centered(g, vr);
    for (std::size_t i = 0; i < pr.size(); ++i) {
      var_p += std::norm(pr[i]);
      var_v += std::norm(vr[i]);
    }
  }
  var_p /= R * g.size();
  var_v /= R * g.size();
  CHECK(var_p == doctest::Approx(ns.sigma_n * ns.sigma_n).epsilon(0.03));
  CHECK(var_v == doctest::Approx(ns.sigma_n * ns.sigma_n).epsilon(0.03));

  // independence from the medium stream: cross-correlation small
  MediumSpec m;
  const RandomField V = sample_field(m, g, eps);
  FieldSet f = detector_noise(ns, eps, g);
  cvec pr = f.p;
  FftEngine::instance().to_real_centered(g, pr);
  double cross = 0.0, nn = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    cross += pr[i].real() * V.values[i];
    nn += pr[i].real() * pr[i].real();
    vv += V.values[i] * V.values[i];
  }
  CHECK(std::abs(cross) / std::sqrt(nn * vv) < 0.02);
}

TEST_CASE("measurement assembly: component additivity is exact") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  MediumSpec m;
  m.sigma0 = 0.1;
  NoiseSpec ns;
  ns.sigma_n = 0.01;
  const RandomField V = sample_field(m, g, s.epsilon);
  Detector D;
  D.center = {1.0, 0.0, 0.0};
  D.side = 0.8;
  Measurement meas = assemble_measurement(
      mean_field(s, 1.0, g, 0.1), born_field(s, V, m, 1.0, g, 0.1),
      detector_noise(ns, s.epsilon, g), D);

  const std::vector<double> total = meas.real_pressure(MeasureSelect::total);
  const std::vector<double> a = meas.real_pressure(MeasureSelect::mean_only);
  const std::vector<double> b = meas.real_pressure(MeasureSelect::born_only);
  const std::vector<double> c = meas.real_pressure(MeasureSelect::noise_only);
  double scale = 0.0;
  for (std::size_t i = 0; i < total.size(); ++i)
    scale = std::max(scale, std::abs(total[i]));
  for (std::size_t i = 0; i < total.size(); i += 53)
    CHECK(std::abs(total[i] - (a[i] + b[i] + c[i])) < 1e-12 * scale);

  Detector outside;
  outside.center = {2.5, 0.0, 0.0};
  outside.side = 0.8;
  CHECK_THROWS(assemble_measurement(mean_field(s, 1.0, g, 0.0), FieldSet{},
                                    FieldSet{}, outside));
}

TEST_CASE("velocity expansion v = -ik A on the spectral lattice") {
  Grid3D g(32, 4.0);
  SourceSpec s = default_source();
  s.epsilon = 0.25;
  s.mu = 1.8;
  FieldSet f = ballistic(s, 0.6, g);
  const cvec v1 = f.velocity_axis(1);
  const std::vector<double> ka = g.axis_k();
  for (std::size_t trial = 0; trial < 5; ++trial) {
    const std::size_t idx = (trial * 7919) % g.size();
    const int j = static_cast<int>((idx / g.n) % g.n);
    const std::complex<double> want =
        std::complex<double>(0.0, -ka[j]) * f.A[idx];
    CHECK(std::abs(v1[idx] - want) <= 1e-14 * (std::abs(want) + 1e-30));
  }
}
