#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "wavecb/io.hpp"
#include "wavecb/medium.hpp"
#include "wavecb/quadrature.hpp"

using namespace wavecb;

namespace {

// Test-side oracle: R(0) = (2 pi)^-3 Int Rhat(k) d^3k by plain Cartesian
// Gauss-Legendre quadrature (delta = 0 only, where Rhat = S).
double variance_oracle_3d(const MediumSpec& spec, double kmax, int m) {
  const GaussLegendre g = GaussLegendre::on(-kmax, kmax, m);
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double kk = std::sqrt(g.x[i] * g.x[i] + g.x[j] * g.x[j] +
                                    g.x[k] * g.x[k]);
        sum += g.w[i] * g.w[j] * g.w[k] * spec.envelope_S(kk);
      }
  return sum / std::pow(2.0 * std::numbers::pi, 3.0);
}

// Test-side oracle: R(r) by a 1D Hankel-type quadrature (composite Simpson).
double correlation_oracle_hankel(const MediumSpec& spec, double r) {
  const double kmax = 7.0 * spec.ks;
  const int n = 4000;
  const double dk = kmax / n;
  auto f = [&](double k) {
    if (k <= 0) return 0.0;
    const double rh = spec.spectrum_Rhat(k);
    return r < 1e-12 ? k * k * rh : k * std::sin(k * r) / r * rh;
  };
  double s = f(0.0) + f(kmax);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * dk);
  return s * dk / 3.0 / (2.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace

TEST_CASE("spec validation") {
  MediumSpec m;
  m.delta = 2.0;
  CHECK_THROWS(m.validate());
  m.delta = -0.1;
  CHECK_THROWS(m.validate());
  m.delta = 0.5;
  m.eta = 1.5;
  CHECK_THROWS(m.validate());
  m.eta = 1.0;
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("zero spectrum gives the zero field") {
  MediumSpec m;
  m.S0 = 0.0;
  Grid3D g(32, 4.0);
  const RandomField f = sample_field(m, g, 0.25);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("grid resolution and determinism") {
  MediumSpec m;
  Grid3D g(64, 4.0);
  CHECK_THROWS(sample_field(m, g, 1.0 / 16));  // h > eps*eta/2
  const RandomField a = sample_field(m, g, 1.0 / 8);
  const RandomField b = sample_field(m, g, 1.0 / 8);
  CHECK(a.values == b.values);  // bit-identical reruns
  const RandomField c = sample_field(m, g, 1.0 / 8, /*salt=*/1);
  CHECK(a.values != c.values);
  CHECK(a.imag_residual_rel < 1e-12);  // Hermitian symmetry
  CHECK(std::abs(a.mean()) < 1e-13);   // DC removed exactly
}

TEST_CASE("variance matches the 3D spectrum-integral oracle (delta = 0)") {
  MediumSpec m;  // auto-normalized: R(0) = 1
  Grid3D g(64, 4.0);
  const double oracle = variance_oracle_3d(m, 7.0 * m.ks, 96);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-6));  // normalization sanity
  double mean_var = 0.0;
  const int reps = 4;
  for (int r = 0; r < reps; ++r)
    mean_var += sample_field(m, g, 1.0 / 8, r).variance();
  mean_var /= reps;
  CHECK(mean_var == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("white-noise limit: flat spectrum decorrelates in one cell") {
  MediumSpec m;
  m.spectrum = SpectrumKind::flat;
  m.S0 = 1.0;
  Grid3D g(32, 4.0);
  const RandomField f = sample_field(m, g, 1.0);
  const RadialTable t = correlation_estimate(f, 16);
  const double r0 = f.variance();
  for (std::size_t b = 2; b < t.r.size(); ++b)
    if (t.count[b]) CHECK(std::abs(t.value[b]) < 0.05 * r0);
}

TEST_CASE("radial correlation matches the Hankel oracle (gaussian, delta=0)") {
  MediumSpec m;
  Grid3D g(64, 16.0);  // V's own units: eps = eta = 1, corr length ~ 1
  const int reps = 32, nlags = 32;
  std::vector<double> acc(nlags, 0.0), r(nlags, 0.0);
  for (int i = 0; i < reps; ++i) {
    const RadialTable t =
        correlation_estimate(sample_field(m, g, 1.0, i), nlags);
    for (int b = 0; b < nlags; ++b) {
      acc[b] += t.value[b] / reps;
      r[b] = t.r[b];
    }
  }
  for (int b = 0; b < nlags; ++b) {
    if (r[b] <= 0 || r[b] > 3.0) continue;
    const double oracle = correlation_oracle_hankel(m, r[b]);
    const double tol = std::max(0.05 * std::abs(oracle), 2.5e-3);
    CHECK(std::abs(acc[b] - oracle) < tol);
  }
}

TEST_CASE("isotropy: axis correlations agree within ensemble scatter") {
  MediumSpec m;
  Grid3D g(48, 12.0);
  const int reps = 12;
  std::vector<std::vector<double>> ax(3, std::vector<double>(g.n / 2, 0.0));
  std::vector<std::vector<double>> ax2(3, std::vector<double>(g.n / 2, 0.0));
  for (int i = 0; i < reps; ++i) {
    const RandomField f = sample_field(m, g, 1.0, i);
    for (int a = 0; a < 3; ++a) {
      const std::vector<double> c = axis_correlation(f, a);
      for (int l = 0; l < g.n / 2; ++l) {
        ax[a][l] += c[l] / reps;
        ax2[a][l] += c[l] * c[l] / reps;
      }
    }
  }
  for (int l = 1; l < 8; ++l) {
    for (int a = 1; a < 3; ++a) {
      const double se = std::sqrt(
          std::max(1e-12, (ax2[0][l] - ax[0][l] * ax[0][l]) / reps * 2.0));
      CHECK(std::abs(ax[a][l] - ax[0][l]) < 5.0 * se + 0.01);
    }
  }
}

TEST_CASE("spectral fidelity: binned power spectrum within 10% per bin") {
  MediumSpec m;
  m.delta = 1.0;
  Grid3D g(48, 6.0);
  const double corr = 1.0;  // eps = eta = 1
  SpectrumAccumulator acc(g, 20, 0.8 * g.k_nyquist());
  const int reps = 32;
  for (int i = 0; i < reps; ++i) acc.add(sample_field(m, g, corr, i));
  const RadialTable est = acc.read();
  const RadialTable expect = acc.expected(m, corr);
  int checked = 0;
  for (std::size_t b = 0; b < est.r.size(); ++b) {
    if (est.count[b] < 6000) continue;  // enough modes x realizations
    ++checked;
    CHECK(est.value[b] == doctest::Approx(expect.value[b]).epsilon(0.10));
  }
  CHECK(checked >= 8);
}

TEST_CASE("long-range tail: R(r) ~ r^(delta-3) at delta = 1") {
  MediumSpec m;
  m.delta = 1.0;
  Grid3D g(128, 40.0);
  const int reps = 32, nlags = 64;
  std::vector<double> acc(nlags, 0.0), r(nlags, 0.0);
  for (int i = 0; i < reps; ++i) {
    const RadialTable t =
        correlation_estimate(sample_field(m, g, 1.0, 1000 + i), nlags);
    for (int b = 0; b < nlags; ++b) {
      acc[b] += t.value[b] / reps;
      r[b] = t.r[b];
    }
  }
  // log-log fit over a decade, r in [1, 10]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int b = 0; b < nlags; ++b) {
    if (r[b] < 1.0 || r[b] > 10.0 || acc[b] <= 0) continue;
    const double lx = std::log(r[b]), ly = std::log(acc[b]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  REQUIRE(n >= 10);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.15));  // -2 +- 0.3
}

TEST_CASE("binary export/import round-trips bit-exactly") {
  MediumSpec m;
  Grid3D g(32, 4.0);
  const RandomField f = sample_field(m, g, 0.25, 5);
  FieldFileMeta meta;
  meta.kind = 0;
  meta.seed = f.stream_seed;
  meta.spec_hash = m.spec_hash();
  const std::string path = "/tmp/wavecb_medium_test.bin";
  write_field_binary(path, g, f.values, meta);
  const LoadedField lf = read_field_binary(path);
  CHECK(lf.grid.n == g.n);
  CHECK(lf.grid.box == doctest::Approx(g.box));
  CHECK(lf.meta.seed == f.stream_seed);
  CHECK(lf.meta.spec_hash == m.spec_hash());
  CHECK(lf.values == f.values);
  std::remove(path.c_str());
}
