#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wavecb {

/// Pointwise ensemble statistics with jackknife error bars on the variance.
struct PointStats {
  double mean = 0.0;
  double var = 0.0;      // unbiased sample variance
  double var_se = 0.0;   // jackknife standard error of var
  double mean_se = 0.0;
  double snr = std::numeric_limits<double>::infinity();  // |mean|/sqrt(var)
};

/// Collects per-realization image vectors; the reduction is a deterministic
/// function of the stored values (ordered by realization index), so results
/// do not depend on the parallel schedule.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(std::size_t n_points, int n_realizations);
  void set(int realization, const std::vector<double>& values);
  std::vector<PointStats> stats() const;
  int realizations() const { return n_real_; }

 private:
  std::size_t n_points_;
  int n_real_;
  std::vector<double> data_;  // [realization][point]
  std::vector<bool> filled_;
};

/// Run fn(realization) for r = 0..n-1 on up to n_threads workers and collect
/// results in index order.
std::vector<std::vector<double>> run_realizations(
    int n_realizations, int n_threads,
    const std::function<std::vector<double>(int)>& fn);

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  int n_used = 0;
  int n_dropped = 0;  // nonpositive values excluded
};

/// Least-squares slope of log(y) vs log(x); requires >= 4 usable points
/// spanning at least a factor 4 in x.
FitResult fit_exponent(const std::vector<double>& x,
                       const std::vector<double>& y);

/// Smallest |z| where var drops below `frac` of var at the probe nearest 0,
/// linearly interpolated; +inf when no crossing lies within the probed range.
double support_width(const std::vector<double>& offsets,
                     const std::vector<double>& var, double frac = 0.1);

/// Theorem-style scaling predictions, in dimensionless variables
/// lambda/L = eps, ell_c/lambda = eta, L = 1. All values are scaling
/// factors ("up to multiplicative constants"); only exponents and ratios
/// are meaningful.
struct TheoryParams {
  double sigma0 = 0.08;
  double sigma_n = 1e-3;
  double mu = 2.0;
  double N_C = 2.0;
  double epsilon = 0.1;
  double eta = 1.0;
  double delta = 0.0;
  double SigmaL = 0.0;  // Sigma * L
};

struct TheoryPrediction {
  double VC = 0.0, VCn = 0.0, VW = 0.0, VWn = 0.0;
  double SNR_C = 0.0, SNR_Cn = 0.0, SNR_W = 0.0, SNR_Wn = 0.0;
  double SNR_C_tot = 0.0, SNR_W_tot = 0.0;
  double EIC_peak = 0.0;    // mean CB peak factor eps^(2(1-g)) ((r0 mu) ^ eps^(g-1))^2
  double lambda_m = 0.0;    // minimal wavelength for SNR ~ 1
  bool extrapolated = false;  // parameters outside the asymptotic regime
};

TheoryPrediction theory_predict(const TheoryParams& p);

/// The three SNR-ratio identities (algebraic consequences of the scaling
/// theorem, quoted for delta = 0):
///   [0] SNR_C/SNR_W when (L/(N_C lambda)) ^ mu = mu       -> mu * lambda/ell_c
///   [1] SNR_C/SNR_W at best resolution N_C = l/lambda,
///       l mu > L (up to the constant (L/l)^2)             -> lambda/ell_c
///   [2] SNR_Cn/SNR_Wn                                     -> ((L/(N_C lambda)) ^ mu)^2
struct SnrRatios {
  double mu_branch = 0.0;
  double best_resolution = 0.0;
  double noise = 0.0;
};
SnrRatios snr_ratio_identities(const TheoryParams& p);

}  // namespace wavecb
