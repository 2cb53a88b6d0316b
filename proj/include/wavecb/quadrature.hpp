#pragma once
#include <functional>
#include <vector>

namespace wavecb {

/// Gauss-Legendre rule with m nodes on [a, b].
struct GaussLegendre {
  std::vector<double> x, w;
  static const GaussLegendre& reference(int m);  // on [-1,1], cached
  static GaussLegendre on(double a, double b, int m);
};

double integrate_gl(const std::function<double(double)>& f, double a,
                    double b, int m);

struct QuadResult {
  double value = 0.0;
  bool converged = false;
  int panels = 0;
};

/// Composite GL-16 integrator for oscillatory integrands: panel density is
/// set from freq_hint (radians per unit length) and doubled until two
/// successive refinements agree to tol (relative, with abs floor).
QuadResult integrate_oscillatory(const std::function<double(double)>& f,
                                 double a, double b, double freq_hint,
                                 double tol = 1e-10, int max_doublings = 12);

}  // namespace wavecb
