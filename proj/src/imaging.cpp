#include "wavecb/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavecb/quadrature.hpp"
#include "wavecb/simd.hpp"

namespace wavecb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

double CBConfig::N_C() const { return r0 * std::pow(epsilon, -gamma_exp); }

double CBConfig::corr_diameter() const { return N_C() * epsilon; }

double CBConfig::window(double u) const {
  if (whole_box_window) return 1.0;
  if (u <= 1.0 - window_rolloff) return 1.0;
  if (u >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (u - 1.0 + window_rolloff) /
                               window_rolloff));
}

void CBConfig::validate(const Detector& detector) const {
  if (!(r0 > 0)) throw std::invalid_argument("cb: r0 must be > 0");
  if (!(gamma_exp >= 0.0 && gamma_exp <= 1.0))
    throw std::invalid_argument("cb: gamma must lie in [0,1]");
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("cb: epsilon must lie in (0,1)");
  if (!whole_box_window) {
    if (!(r0 < detector.side))
      throw std::invalid_argument(
          "cb: r0 must be smaller than the detector side l/L");
    if (N_C() < 1.0)
      throw std::invalid_argument(
          "cb: N_C = r0*eps^-gamma = " + std::to_string(N_C()) +
          " < 1 (no subwavelength correlations)");
  }
  if (n_polar < 2 || n_azimuth < 4 || n_radial < 3)
    throw std::invalid_argument("cb: quadrature too small");
}

// ---------------------------------------------------------------- WB

Image wb_image(const Measurement& meas, std::span<const Vec3> probes,
               MeasureSelect sel, WbMode mode) {
  const Grid3D& g = meas.grid;
  const std::size_t N = g.size();
  const double T = meas.time;

  // restrict to the detector (sharp cut), transform, backpropagate
  std::vector<double> pr = meas.real_pressure(sel);
  cvec data(N);
  {
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k, ++idx)
          data[idx] = meas.detector.contains(g.position(i, j, k)) ? pr[idx]
                                                                  : 0.0;
  }
  FftEngine::instance().to_spectral_centered(g, data);
  const std::vector<double> absk = g.make_abs_k();
  simd::kernels().cos_scale(N, absk.data(), T, data.data());

  if (mode == WbMode::full) {
    std::vector<double> pt = meas.real_pressure_t(sel);
    cvec dt(N);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k, ++idx)
          dt[idx] = meas.detector.contains(g.position(i, j, k)) ? pt[idx] : 0.0;
    FftEngine::instance().to_spectral_centered(g, dt);
    for (std::size_t i = 0; i < N; ++i) {
      const double a = absk[i];
      const double w = a < 1e-12 ? T : std::sin(a * T) / a;
      data[i] -= w * dt[i];
    }
  }

  // sample at probes by direct spectral sum
  Image img;
  img.probes.assign(probes.begin(), probes.end());
  img.values.resize(probes.size());
  const int n = g.n;
  std::vector<std::complex<double>> phx(n), phy(n), phz(n);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      const double k = g.k_axis(i);
      phx[i] = std::polar(1.0, k * probes[p].x);
      phy[i] = std::polar(1.0, k * probes[p].y);
      phz[i] = std::polar(1.0, k * probes[p].z);
    }
    std::complex<double> acc(0.0, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::complex<double> pij = phx[i] * phy[j];
        std::complex<double> row(0.0, 0.0);
        for (int k = 0; k < n; ++k, ++idx) row += data[idx] * phz[k];
        acc += pij * row;
      }
    img.values[p] = acc.real() / static_cast<double>(N);
  }
  return img;
}

// ---------------------------------------------------------------- CB

CbEvaluator::CbEvaluator(const Measurement& meas, const CBConfig& cfg,
                         const SourceSpec& source, MeasureSelect sel)
    : cfg_(cfg), detector_(meas.detector) {
  cfg.validate(meas.detector);
  const Grid3D& g = meas.grid;
  const double h = g.spacing();

  // Sampling lattice: half-grid when h is coarse enough to matter for
  // center snapping, full grid otherwise (or for whole-box windows).
  const bool half = !cfg.whole_box_window && h > 0.04;
  hs_ = half ? 0.5 * h : h;
  // whole-box windows span every min-image offset (step 2h, |m| <= n/4 - 1)
  rho_ = cfg.whole_box_window ? 2.0 * h * (g.n / 4 - 1) + 1e-9
                              : cfg.corr_diameter();
  ball_shrink_ = cfg.whole_box_window
                     ? 0.0
                     : (cfg.fixed_cap_shrink >= 0.0 ? cfg.fixed_cap_shrink
                                                    : 0.5 * rho_);

  // offset Nyquist guard for the radial band
  carrier_ = source.carrier();
  double halfw = std::min(cfg.band_mult / (source.epsilon * source.mu),
                          cfg.band_frac_cap * carrier_);
  const double q_nyq = kPi / (2.0 * hs_);
  if (carrier_ + halfw > 0.95 * q_nyq) halfw = 0.95 * q_nyq - carrier_;
  if (!(halfw > 0))
    throw std::invalid_argument(
        "cb: carrier exceeds the offset-lattice Nyquist; refine the grid");
  {
    const GaussLegendre gl =
        GaussLegendre::on(carrier_ - halfw, carrier_ + halfw, cfg.n_radial);
    q_nodes_ = gl.x;
    q_weights_ = gl.w;
  }

  // folded offset list
  const int mmax = static_cast<int>(std::floor(rho_ / (2.0 * hs_)));
  for (int mx = -mmax; mx <= mmax; ++mx)
    for (int my = -mmax; my <= mmax; ++my)
      for (int mz = -mmax; mz <= mmax; ++mz) {
        // keep the lexicographically positive representative of each pair
        if (mx < 0 || (mx == 0 && (my < 0 || (my == 0 && mz < 0)))) continue;
        const Vec3 s{2.0 * hs_ * mx, 2.0 * hs_ * my, 2.0 * hs_ * mz};
        const double sn = s.norm();
        if (sn > rho_) continue;
        double chi = cfg.window(sn / rho_);
        if (chi < 1e-12) continue;
        const bool zero = (mx == 0 && my == 0 && mz == 0);
        offsets_.push_back({{mx, my, mz}, zero ? chi : 2.0 * chi, s});
      }

  build_crop(meas, sel);
}

void CbEvaluator::build_crop(const Measurement& meas, MeasureSelect sel) {
  const Grid3D& g = meas.grid;
  const double h = g.spacing();
  const bool half = hs_ < 0.75 * h;
  const int lattice_n = half ? 2 * g.n : g.n;

  // region: detector expanded so every center +- offset/2 stays inside
  const double expand = 0.5 * rho_ + std::max(0.0, 0.5 * rho_ - ball_shrink_) +
                        2.0 * hs_;
  int g_lo[3], g_hi[3];
  const double c[3] = {detector_.center.x, detector_.center.y,
                       detector_.center.z};
  bool whole = cfg_.whole_box_window;
  for (int ax = 0; ax < 3 && !whole; ++ax) {
    const double lo = c[ax] - 0.5 * detector_.side - expand;
    const double hi = c[ax] + 0.5 * detector_.side + expand;
    g_lo[ax] = static_cast<int>(std::floor((lo + 0.5 * g.box) / hs_)) - 1;
    g_hi[ax] = static_cast<int>(std::ceil((hi + 0.5 * g.box) / hs_)) + 1;
    if (g_lo[ax] < 0 || g_hi[ax] >= lattice_n) whole = true;
  }
  if (whole) {
    for (int ax = 0; ax < 3; ++ax) {
      g_lo[ax] = 0;
      g_hi[ax] = lattice_n - 1;
    }
    crop_.wrap = true;
  }
  for (int ax = 0; ax < 3; ++ax) crop_.dim[ax] = g_hi[ax] - g_lo[ax] + 1;
  crop_.origin = {-0.5 * g.box + g_lo[0] * hs_, -0.5 * g.box + g_lo[1] * hs_,
                  -0.5 * g.box + g_lo[2] * hs_};
  const std::size_t M = static_cast<std::size_t>(crop_.dim[0]) * crop_.dim[1] *
                        crop_.dim[2];
  crop_.p.assign(M, 0.f);
  crop_.v0.assign(M, 0.f);
  crop_.v1.assign(M, 0.f);
  crop_.v2.assign(M, 0.f);

  const cvec spec_p = meas.combined_p(sel);
  std::array<cvec, 3> spec_v = {meas.combined_v(sel, 0),
                                meas.combined_v(sel, 1),
                                meas.combined_v(sel, 2)};

  const int n_par = half ? 2 : 1;
  for (int bx = 0; bx < n_par; ++bx)
    for (int by = 0; by < n_par; ++by)
      for (int bz = 0; bz < n_par; ++bz) {
        const Vec3 shift{bx * 0.5 * h, by * 0.5 * h, bz * 0.5 * h};
        for (int field = 0; field < 4; ++field) {
          const cvec& spec = field == 0 ? spec_p : spec_v[field - 1];
          std::vector<float>& dst = field == 0
                                        ? crop_.p
                                        : (field == 1 ? crop_.v0
                                                      : (field == 2 ? crop_.v1
                                                                    : crop_.v2));
          std::vector<double> real = shifted_real(g, spec, shift);
          // scatter the matching parity class into the crop
          for (int i = 0; i < crop_.dim[0]; ++i) {
            int gx = g_lo[0] + i;
            gx %= lattice_n;
            if (gx < 0) gx += lattice_n;
            if (half && (gx & 1) != bx) continue;
            const int jx = half ? gx >> 1 : gx;
            for (int j = 0; j < crop_.dim[1]; ++j) {
              int gy = g_lo[1] + j;
              gy %= lattice_n;
              if (gy < 0) gy += lattice_n;
              if (half && (gy & 1) != by) continue;
              const int jy = half ? gy >> 1 : gy;
              for (int k = 0; k < crop_.dim[2]; ++k) {
                int gz = g_lo[2] + k;
                gz %= lattice_n;
                if (gz < 0) gz += lattice_n;
                if (half && (gz & 1) != bz) continue;
                const int jz = half ? gz >> 1 : gz;
                dst[(static_cast<std::size_t>(i) * crop_.dim[1] + j) *
                        crop_.dim[2] +
                    k] = static_cast<float>(real[g.index(jx, jy, jz)]);
              }
            }
          }
        }
      }
}

bool CbEvaluator::snap_center(const Vec3& x, int idx[3]) const {
  const double o[3] = {crop_.origin.x, crop_.origin.y, crop_.origin.z};
  const double xx[3] = {x.x, x.y, x.z};
  for (int ax = 0; ax < 3; ++ax) {
    int c = static_cast<int>(std::lround((xx[ax] - o[ax]) / hs_));
    if (crop_.wrap) {
      c %= crop_.dim[ax];
      if (c < 0) c += crop_.dim[ax];
    } else if (c < 0 || c >= crop_.dim[ax]) {
      return false;
    }
    idx[ax] = c;
  }
  return true;
}

double CbEvaluator::windowed_sum(const int center[3], const Vec3& qhat,
                                 std::span<const double> qmags,
                                 double* out) const {
  const int d0 = crop_.dim[0], d1 = crop_.dim[1], d2 = crop_.dim[2];
  const std::size_t n_off = offsets_.size();
  static thread_local std::vector<double> P, tau;
  P.resize(n_off);
  tau.resize(n_off);
  const float qx = static_cast<float>(qhat.x),
              qy = static_cast<float>(qhat.y),
              qz = static_cast<float>(qhat.z);
  auto phi_at = [&](int i, int j, int k) -> double {
    const std::size_t a = (static_cast<std::size_t>(i) * d1 + j) * d2 + k;
    return (qx * crop_.v0[a] + qy * crop_.v1[a] + qz * crop_.v2[a] +
            crop_.p[a]) *
           kInvSqrt2;
  };
  auto wrapped = [&](int v, int dim) {
    if (!crop_.wrap) return v;
    v %= dim;
    return v < 0 ? v + dim : v;
  };
  for (std::size_t t = 0; t < n_off; ++t) {
    const Offset& o = offsets_[t];
    const int ia = wrapped(center[0] - o.m[0], d0);
    const int ja = wrapped(center[1] - o.m[1], d1);
    const int ka = wrapped(center[2] - o.m[2], d2);
    const int ib = wrapped(center[0] + o.m[0], d0);
    const int jb = wrapped(center[1] + o.m[1], d1);
    const int kb = wrapped(center[2] + o.m[2], d2);
    P[t] = o.chi * phi_at(ia, ja, ka) * phi_at(ib, jb, kb);
    tau[t] = qhat.dot(o.s);
  }
  std::fill(out, out + qmags.size(), 0.0);
  simd::kernels().phase_sum_sym(n_off, P.data(), tau.data(), qmags.size(),
                                qmags.data(), out);
  return 0.0;
}

namespace {

// orthonormal frame completing the axis
void make_frame(const Vec3& a, Vec3& e1, Vec3& e2) {
  const Vec3 t = std::abs(a.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 c{a.y * t.z - a.z * t.y, a.z * t.x - a.x * t.z,
               a.x * t.y - a.y * t.x};
  e1 = c.normalized();
  e2 = {a.y * e1.z - a.z * e1.y, a.z * e1.x - a.x * e1.z,
        a.x * e1.y - a.y * e1.x};
}

struct Cap {
  Vec3 axis;
  double cos_theta_max = 1.0;
  bool ok = false;
};

Cap direction_cap(const Vec3& z, const Detector& D, bool whole_sphere) {
  Cap cap;
  if (whole_sphere) {
    cap.axis = {1, 0, 0};
    cap.cos_theta_max = -1.0;
    cap.ok = true;
    return cap;
  }
  // reachable iff the unit sphere around z meets D
  const double hx = 0.5 * D.side;
  double dmin2 = 0.0, dmax2 = 0.0;
  const double zc[3] = {z.x - D.center.x, z.y - D.center.y, z.z - D.center.z};
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = -hx - zc[ax], hi = hx - zc[ax];
    const double closest = std::clamp(0.0, lo, hi);
    dmin2 += closest * closest;
    const double farthest = std::max(std::abs(lo), std::abs(hi));
    dmax2 += farthest * farthest;
  }
  if (dmin2 > 1.0 || dmax2 < 1.0) return cap;  // empty direction set
  Vec3 to_center{D.center.x - z.x, D.center.y - z.y, D.center.z - z.z};
  if (to_center.norm() < 1e-12) return cap;
  cap.axis = to_center.normalized();
  double cmin = 1.0;
  for (int cx = -1; cx <= 1; cx += 2)
    for (int cy = -1; cy <= 1; cy += 2)
      for (int cz = -1; cz <= 1; cz += 2) {
        const Vec3 corner{D.center.x + cx * hx, D.center.y + cy * hx,
                          D.center.z + cz * hx};
        const Vec3 d = (corner - z).normalized();
        cmin = std::min(cmin, d.dot(cap.axis));
      }
  cap.cos_theta_max = std::max(-1.0, cmin - 1e-12);
  cap.ok = true;
  return cap;
}

}  // namespace

double CbEvaluator::image_at(const Vec3& probe, bool* empty_directions) const {
  const Cap cap = direction_cap(probe, detector_, cfg_.whole_box_window);
  if (empty_directions) *empty_directions = !cap.ok;
  if (!cap.ok) return 0.0;

  Vec3 e1, e2;
  make_frame(cap.axis, e1, e2);
  const GaussLegendre glp =
      GaussLegendre::on(cap.cos_theta_max, 1.0, cfg_.n_polar);
  const double wphi = 2.0 * kPi / cfg_.n_azimuth;

  static thread_local std::vector<double> as;
  as.resize(q_nodes_.size());
  double total = 0.0;
  bool any_valid = false;
  for (int ip = 0; ip < cfg_.n_polar; ++ip) {
    const double ct = glp.x[ip], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int ia = 0; ia < cfg_.n_azimuth; ++ia) {
      const double phi = wphi * (ia + 0.5);
      const Vec3 dir{
          cap.axis.x * ct + st * (std::cos(phi) * e1.x + std::sin(phi) * e2.x),
          cap.axis.y * ct + st * (std::cos(phi) * e1.y + std::sin(phi) * e2.y),
          cap.axis.z * ct + st * (std::cos(phi) * e1.z + std::sin(phi) * e2.z)};
      const Vec3 x = probe + dir;
      int c[3];
      if (!snap_center(x, c)) continue;
      const Vec3 snapped{crop_.origin.x + c[0] * hs_,
                         crop_.origin.y + c[1] * hs_,
                         crop_.origin.z + c[2] * hs_};
      if (!cfg_.whole_box_window &&
          !detector_.contains(snapped, ball_shrink_))
        continue;
      any_valid = true;
      windowed_sum(c, dir, q_nodes_, as.data());
      double radial = 0.0;
      for (std::size_t r = 0; r < q_nodes_.size(); ++r)
        radial += q_weights_[r] * q_nodes_[r] * q_nodes_[r] * as[r];
      total += glp.w[ip] * wphi * radial;
    }
  }
  if (empty_directions) *empty_directions = !any_valid;
  const double cell = 2.0 * hs_;
  return total * cell * cell * cell;  // (2 pi)^3 prefactor cancels 1/(2 pi)^3
}

Image CbEvaluator::image(std::span<const Vec3> probes) const {
  Image img;
  img.probes.assign(probes.begin(), probes.end());
  img.values.resize(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    bool empty = false;
    img.values[i] = image_at(probes[i], &empty);
    if (empty) ++img.empty_direction_probes;
  }
  return img;
}

double CbEvaluator::mode_amplitude(const Vec3& x, const Vec3& q) const {
  int c[3];
  if (!snap_center(x, c))
    throw std::invalid_argument("mode_amplitude: point outside field crop");
  const double qm = q.norm();
  const Vec3 qhat = q.normalized();
  double as = 0.0;
  windowed_sum(c, qhat, std::span<const double>(&qm, 1), &as);
  const double cell = 2.0 * hs_;
  return as * cell * cell * cell / std::pow(2.0 * kPi, 3.0);
}

std::complex<double> CbEvaluator::mode_amplitude_reference(
    const Vec3& x, const Vec3& q, bool minus_mode) const {
  int c[3];
  if (!snap_center(x, c))
    throw std::invalid_argument("mode_amplitude_reference: outside crop");
  const Vec3 qhat = q.normalized();
  const double qm = q.norm();
  const double sgn = minus_mode ? -1.0 : 1.0;
  const int d0 = crop_.dim[0], d1 = crop_.dim[1], d2 = crop_.dim[2];
  auto wrapped = [&](int v, int dim) {
    if (!crop_.wrap) return v;
    v %= dim;
    return v < 0 ? v + dim : v;
  };
  auto phi_at = [&](int i, int j, int k) -> double {
    const std::size_t a = (static_cast<std::size_t>(i) * d1 + j) * d2 + k;
    return (sgn * (qhat.x * crop_.v0[a] + qhat.y * crop_.v1[a] +
                   qhat.z * crop_.v2[a]) +
            crop_.p[a]) *
           kInvSqrt2;
  };
  std::complex<double> acc(0.0, 0.0);
  for (const Offset& o : offsets_) {
    const bool zero = o.m[0] == 0 && o.m[1] == 0 && o.m[2] == 0;
    const double chi = zero ? o.chi : 0.5 * o.chi;  // unfold the pair weight
    for (int sign = 0; sign < (zero ? 1 : 2); ++sign) {
      const int sx = sign ? -o.m[0] : o.m[0];
      const int sy = sign ? -o.m[1] : o.m[1];
      const int sz = sign ? -o.m[2] : o.m[2];
      const int ia = wrapped(c[0] - sx, d0), ja = wrapped(c[1] - sy, d1),
                ka = wrapped(c[2] - sz, d2);
      const int ib = wrapped(c[0] + sx, d0), jb = wrapped(c[1] + sy, d1),
                kb = wrapped(c[2] + sz, d2);
      const double prod = chi * phi_at(ia, ja, ka) * phi_at(ib, jb, kb);
      const double phase =
          qm * (qhat.x * sx + qhat.y * sy + qhat.z * sz) * 2.0 * hs_;
      acc += prod * std::polar(1.0, phase);
    }
  }
  const double cell = 2.0 * hs_;
  return acc * (cell * cell * cell / std::pow(2.0 * kPi, 3.0));
}

Image cb_image(const Measurement& meas, std::span<const Vec3> probes,
               const CBConfig& cfg, const SourceSpec& source,
               MeasureSelect sel) {
  CbEvaluator ev(meas, cfg, source, sel);
  return ev.image(probes);
}

std::vector<Vec3> ProbeLine::points() const {
  std::vector<Vec3> p(count);
  for (int i = 0; i < count; ++i)
    p[i] = direction * (-halfspan + 2.0 * halfspan * i / (count - 1));
  return p;
}

std::vector<double> ProbeLine::offsets() const {
  std::vector<double> o(count);
  for (int i = 0; i < count; ++i)
    o[i] = -halfspan + 2.0 * halfspan * i / (count - 1);
  return o;
}

double fwhm_line(std::span<const double> offsets,
                 std::span<const double> values) {
  if (offsets.size() != values.size() || values.size() < 3) return 0.0;
  std::size_t ipk = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[ipk])) ipk = i;
  const double half = 0.5 * std::abs(values[ipk]);
  double left = 0.0, right = 0.0;
  for (std::size_t i = ipk; i-- > 0;) {
    if (std::abs(values[i]) < half) {
      const double f = (std::abs(values[i + 1]) - half) /
                       (std::abs(values[i + 1]) - std::abs(values[i]));
      left = offsets[ipk] - (offsets[i + 1] + f * (offsets[i] - offsets[i + 1]));
      break;
    }
  }
  for (std::size_t i = ipk + 1; i < values.size(); ++i) {
    if (std::abs(values[i]) < half) {
      const double f = (std::abs(values[i - 1]) - half) /
                       (std::abs(values[i - 1]) - std::abs(values[i]));
      right = (offsets[i - 1] + f * (offsets[i] - offsets[i - 1])) - offsets[ipk];
      break;
    }
  }
  if (left <= 0.0 || right <= 0.0) return 0.0;
  return left + right;
}

}  // namespace wavecb
