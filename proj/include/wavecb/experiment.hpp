#pragma once
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavecb/attenuation.hpp"
#include "wavecb/ensemble.hpp"
#include "wavecb/imaging.hpp"

namespace wavecb {

struct ProbeConfig {
  double halfspan = -1.0;  // <0: min(8*eps*mu, 0.35*box)
  int count = 65;
  Vec3 direction{0.0, 1.0, 0.0};
};

enum class SweepAxis { none, sigma0, sigma_n, cb_gamma };
const char* sweep_axis_name(SweepAxis a);

struct SweepConfig {
  SweepAxis axis = SweepAxis::none;
  std::vector<double> values;
};

/// One experiment: a (possibly single-point) sweep of Monte Carlo ensembles
/// with attributed WB/CB imaging statistics.
struct ExperimentConfig {
  Grid3D grid{64, 4.0};
  MediumSpec medium;
  SourceSpec source;
  NoiseSpec noise;
  Detector detector;
  CBConfig cb;
  ProbeConfig probes;
  int n_realizations = 8;
  bool with_wb = true;
  bool with_cb = true;
  SweepConfig sweep;
  std::string out_dir = "out";
  int threads = 1;

  double probe_halfspan_effective() const;
  std::vector<Vec3> probe_points() const;
  std::vector<double> probe_offsets() const;
  /// Full constraint report; empty means valid.
  std::vector<std::string> validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct SeriesStats {
  std::vector<PointStats> probes;
  double width = 0.0;  // 10%-of-peak support width (inf = beyond range)
};

struct SweepPointResult {
  double axis_value = 0.0;
  double Sigma = 0.0;
  std::map<std::string, SeriesStats> series;  // "WB.single", "CB.noise", ...
};

struct CheckResult {
  std::string name;
  double measured = 0.0, expected = 0.0, tol = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::vector<double> probe_offsets;
  std::vector<SweepPointResult> points;
  std::map<std::string, FitResult> slopes;
  std::vector<CheckResult> checks;
};

/// Runs the experiment and writes CSVs plus summary.json under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> grid_n;
  std::optional<std::string> sweep_axis;
};

// exit codes: 0 ok, 2 config/validation error, 3 runtime failure
int cmd_validate(const std::string& config_path, std::ostream& out);
int cmd_run(const std::string& config_path, const CliOverrides& ov,
            std::ostream& out);
int cmd_report(const std::string& results_dir, std::ostream& out);

}  // namespace wavecb
