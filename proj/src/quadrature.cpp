#include "wavecb/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wavecb {

namespace {

GaussLegendre compute_reference(int m) {
  if (m < 1) throw std::invalid_argument("GaussLegendre: m >= 1 required");
  GaussLegendre g;
  g.x.resize(m);
  g.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    g.x[i] = -x;
    g.x[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    g.w[i] = w;
    g.w[m - 1 - i] = w;
  }
  if (m % 2 == 1) g.x[m / 2] = 0.0;
  return g;
}

std::map<int, GaussLegendre> g_cache;
std::mutex g_cache_mutex;

}  // namespace

const GaussLegendre& GaussLegendre::reference(int m) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_cache.find(m);
  if (it == g_cache.end()) it = g_cache.emplace(m, compute_reference(m)).first;
  return it->second;
}

GaussLegendre GaussLegendre::on(double a, double b, int m) {
  const GaussLegendre& ref = reference(m);
  GaussLegendre g;
  g.x.resize(m);
  g.w.resize(m);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    g.x[i] = mid + half * ref.x[i];
    g.w[i] = half * ref.w[i];
  }
  return g;
}

double integrate_gl(const std::function<double(double)>& f, double a,
                    double b, int m) {
  const GaussLegendre g = GaussLegendre::on(a, b, m);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += g.w[i] * f(g.x[i]);
  return s;
}

QuadResult integrate_oscillatory(const std::function<double(double)>& f,
                                 double a, double b, double freq_hint,
                                 double tol, int max_doublings) {
  const double cycles = std::abs(freq_hint) * std::abs(b - a) /
                        (2.0 * std::numbers::pi);
  int panels = std::max(4, static_cast<int>(std::ceil(3.0 * cycles)));
  auto composite = [&](int np) {
    double s = 0.0;
    const double hstep = (b - a) / np;
    for (int p = 0; p < np; ++p)
      s += integrate_gl(f, a + p * hstep, a + (p + 1) * hstep, 16);
    return s;
  };
  QuadResult r;
  double prev = composite(panels);
  for (int d = 0; d < max_doublings; ++d) {
    panels *= 2;
    const double cur = composite(panels);
    if (std::abs(cur - prev) <= tol * (std::abs(cur) + 1e-300) ||
        std::abs(cur - prev) <= 1e-15) {
      r.value = cur;
      r.converged = true;
      r.panels = panels;
      return r;
    }
    prev = cur;
  }
  r.value = prev;
  r.converged = false;
  r.panels = panels;
  return r;
}

}  // namespace wavecb
