#include <CLI11.hpp>

#include <iostream>

#include "wavecb/experiment.hpp"
#include "wavecb/simd.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wavecb - wave/correlation-based imaging test bench"};
  app.require_subcommand(1);

  std::string config_path, results_dir;
  wavecb::CliOverrides ov;
  std::string out_dir, sweep_axis, simd_path;
  std::uint64_t seed = 0;
  int threads = 0, grid_n = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--seed", seed, "base seed override");
    cmd->add_option("--threads", threads, "worker thread cap");
    cmd->add_option("--grid-n", grid_n, "grid resolution override");
    cmd->add_option("--sweep", sweep_axis,
                    "sweep axis override (none|sigma0|sigma_n|cb_gamma)");
    cmd->add_option("--simd", simd_path, "kernel path (auto|scalar|avx2|neon)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("--config", config_path, "experiment config (json)")
      ->required();

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  run->add_option("--config", config_path, "experiment config (json)")
      ->required();
  add_common(run);

  CLI::App* report =
      app.add_subcommand("report", "summarize results of a finished run");
  report->add_option("--results", results_dir, "results directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (!simd_path.empty() && simd_path != "auto") {
    try {
      if (simd_path == "scalar")
        wavecb::simd::force_path(wavecb::simd::Path::scalar);
      else if (simd_path == "avx2")
        wavecb::simd::force_path(wavecb::simd::Path::avx2);
      else if (simd_path == "neon")
        wavecb::simd::force_path(wavecb::simd::Path::neon);
      else
        throw std::runtime_error("unknown simd path: " + simd_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (out_dir.size()) ov.out_dir = out_dir;
  if (seed) ov.seed = seed;
  if (threads) ov.threads = threads;
  if (grid_n) ov.grid_n = grid_n;
  if (sweep_axis.size()) ov.sweep_axis = sweep_axis;

  if (validate->parsed()) return wavecb::cmd_validate(config_path, std::cout);
  if (run->parsed()) return wavecb::cmd_run(config_path, ov, std::cout);
  if (report->parsed()) return wavecb::cmd_report(results_dir, std::cout);
  return 1;
}
