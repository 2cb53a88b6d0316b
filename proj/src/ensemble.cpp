#include "wavecb/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wavecb {

EnsembleAccumulator::EnsembleAccumulator(std::size_t n_points,
                                         int n_realizations)
    : n_points_(n_points), n_real_(n_realizations) {
  if (n_realizations < 2)
    throw std::invalid_argument("ensemble: need at least 2 realizations");
  data_.assign(n_points_ * n_real_, 0.0);
  filled_.assign(n_real_, false);
}

void EnsembleAccumulator::set(int r, const std::vector<double>& values) {
  if (r < 0 || r >= n_real_ || values.size() != n_points_)
    throw std::invalid_argument("ensemble: bad realization record");
  std::copy(values.begin(), values.end(), data_.begin() + r * n_points_);
  filled_[r] = true;
}

std::vector<PointStats> EnsembleAccumulator::stats() const {
  for (bool f : filled_)
    if (!f) throw std::runtime_error("ensemble: missing realizations");
  const int R = n_real_;
  std::vector<PointStats> out(n_points_);
  std::vector<double> x(R);
  for (std::size_t p = 0; p < n_points_; ++p) {
    double mean = 0.0;
    for (int r = 0; r < R; ++r) {
      x[r] = data_[r * n_points_ + p];
      mean += x[r];
    }
    mean /= R;
    double ss = 0.0;
    for (int r = 0; r < R; ++r) ss += (x[r] - mean) * (x[r] - mean);
    const double var = ss / (R - 1);

    // jackknife over the variance estimator
    double jsum = 0.0, jsq = 0.0;
    for (int r = 0; r < R; ++r) {
      const double mean_i = (mean * R - x[r]) / (R - 1);
      const double ss_i = ss - (x[r] - mean) * (x[r] - mean) * R / (R - 1.0);
      const double var_i = std::max(0.0, ss_i) / (R - 2);
      jsum += var_i;
      jsq += var_i * var_i;
    }
    const double jmean = jsum / R;
    const double var_se =
        std::sqrt(std::max(0.0, (R - 1.0) / R * (jsq - R * jmean * jmean)));

    PointStats s;
    s.mean = mean;
    s.var = var;
    s.var_se = var_se;
    s.mean_se = std::sqrt(var / R);
    s.snr = var > 0 ? std::abs(mean) / std::sqrt(var)
                    : std::numeric_limits<double>::infinity();
    out[p] = s;
  }
  return out;
}

std::vector<std::vector<double>> run_realizations(
    int n_realizations, int n_threads,
    const std::function<std::vector<double>(int)>& fn) {
  std::vector<std::vector<double>> out(n_realizations);
  if (n_threads <= 0) n_threads = std::thread::hardware_concurrency();
  n_threads = std::max(1, std::min(n_threads, n_realizations));
  if (n_threads == 1) {
    for (int r = 0; r < n_realizations; ++r) out[r] = fn(r);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n_realizations) return;
      try {
        out[r] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

FitResult fit_exponent(const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  std::vector<double> lx, ly;
  FitResult f;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    } else {
      ++f.n_dropped;
    }
  }
  const int n = static_cast<int>(lx.size());
  if (n < 4)
    throw std::invalid_argument("fit_exponent: need >= 4 positive points");
  double xmin = lx[0], xmax = lx[0];
  for (double v : lx) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  if (xmax - xmin < std::log(4.0) - 1e-9)
    throw std::invalid_argument("fit_exponent: x must span a factor >= 4");

  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    const double e = ly[i] - (f.intercept + f.slope * lx[i]);
    rss += e * e;
  }
  f.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  f.n_used = n;
  return f;
}

double support_width(const std::vector<double>& offsets,
                     const std::vector<double>& var, double frac) {
  if (offsets.size() != var.size() || var.empty())
    throw std::invalid_argument("support_width: bad input");
  // reference: probe nearest the origin
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (std::abs(offsets[i]) < std::abs(offsets[i0])) i0 = i;
  const double v0 = var[i0];
  if (!(v0 > 0)) return std::numeric_limits<double>::infinity();
  const double thr = frac * v0;

  // order probes by |z| and find the first interpolated crossing
  std::vector<std::size_t> order(offsets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(offsets[a]) < std::abs(offsets[b]);
  });
  double prev_z = std::abs(offsets[order[0]]);
  double prev_v = var[order[0]];
  for (std::size_t oi = 1; oi < order.size(); ++oi) {
    const double z = std::abs(offsets[order[oi]]);
    const double v = var[order[oi]];
    if (prev_v >= thr && v < thr) {
      const double f = (prev_v - thr) / (prev_v - v);
      return prev_z + f * (z - prev_z);
    }
    prev_z = z;
    prev_v = v;
  }
  return std::numeric_limits<double>::infinity();
}

TheoryPrediction theory_predict(const TheoryParams& p) {
  if (!(p.delta >= 0 && p.delta < 2))
    throw std::invalid_argument("theory_predict: delta must lie in [0,2)");
  TheoryPrediction t;
  const double eps = p.epsilon, eta = p.eta, mu = p.mu, nc = p.N_C;
  const double d = p.delta;
  const double att1 = std::exp(-p.SigmaL), att2 = std::exp(-2.0 * p.SigmaL);
  const double atth = std::exp(-0.5 * p.SigmaL);

  t.extrapolated = !(mu > 1.0) || !(mu * mu * eps < 1.0) || !(eta <= 1.0) ||
                   !(nc >= 1.0);

  const double Llam = 1.0 / eps;  // L / lambda
  t.VW = att1 * p.sigma0 * p.sigma0;
  t.VWn = p.sigma_n * p.sigma_n;
  t.VCn = att1 * p.sigma_n * p.sigma_n * std::pow(eps, 4.0) *
          std::pow(nc, 4.0);
  {
    const double branch1 = std::pow(mu, -2.0) * std::pow(eta, 3.0 - d) *
                           std::pow(eps, std::min(1.0 - d, 0.0)) *
                           std::min(std::pow(Llam, 4.0),
                                    std::pow(nc * mu, 4.0));
    const double branch2 =
        std::pow(eta, std::min(3.0 - d, 2.0)) * std::pow(nc, 4.0);
    t.VC = att2 * p.sigma0 * p.sigma0 * std::pow(eps, 4.0) *
           std::max(branch1, branch2);
  }

  t.SNR_W = 1.0 / p.sigma0;
  t.SNR_Wn = atth / p.sigma_n;
  const double res_term = std::min(std::pow(Llam / nc, 2.0), mu * mu);
  t.SNR_Cn = atth / p.sigma_n * res_term;
  {
    const double b1 = mu * std::pow(1.0 / eta, (3.0 - d) / 2.0) *
                      std::pow(Llam, std::min((1.0 - d) / 2.0, 0.0));
    const double b2 =
        std::pow(1.0 / eta, std::min((3.0 - d) / 2.0, 1.0)) * res_term;
    t.SNR_C = std::min(b1, b2) / p.sigma0;
  }
  t.SNR_C_tot = std::min(t.SNR_C, t.SNR_Cn);
  t.SNR_W_tot = std::min(t.SNR_W, t.SNR_Wn);

  // mean CB peak amplitude factor, gamma recovered from N_C = r0 eps^-gamma
  // is not needed: eps^(2(1-g)) ((r0 mu) ^ eps^(g-1))^2 = (eps^2) (N_C mu ^ 1/eps)^2 * eps^(-2g)...
  // expressed directly in (N_C, mu, eps):
  t.EIC_peak = std::pow(eps, 2.0) *
               std::pow(std::min(nc * mu, Llam), 2.0);

  if (p.sigma_n > 0 && p.sigma_n < 1) {
    const double tau_n = -std::log(p.sigma_n);
    t.lambda_m = std::pow(p.sigma0 * p.sigma0 *
                              std::pow(eta * eps, 3.0 - d) /
                              (tau_n * (1.0 - d / 2.0)),
                          1.0 / (4.0 - d));
  }
  return t;
}

SnrRatios snr_ratio_identities(const TheoryParams& p) {
  SnrRatios r;
  r.mu_branch = p.mu / p.eta;           // mu * lambda / ell_c
  r.best_resolution = 1.0 / p.eta;      // lambda / ell_c
  const double Llam = 1.0 / p.epsilon;
  r.noise = std::pow(std::min(Llam / p.N_C, p.mu), 2.0);
  return r;
}

}  // namespace wavecb
