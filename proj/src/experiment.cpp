#include "wavecb/experiment.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wavecb/io.hpp"
#include "wavecb/rng.hpp"

namespace wavecb {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::sigma0: return "sigma0";
    case SweepAxis::sigma_n: return "sigma_n";
    case SweepAxis::cb_gamma: return "cb_gamma";
  }
  return "?";
}

static SweepAxis sweep_axis_from(const std::string& s) {
  if (s == "none") return SweepAxis::none;
  if (s == "sigma0") return SweepAxis::sigma0;
  if (s == "sigma_n") return SweepAxis::sigma_n;
  if (s == "cb_gamma") return SweepAxis::cb_gamma;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

double ExperimentConfig::probe_halfspan_effective() const {
  if (probes.halfspan > 0) return probes.halfspan;
  return std::min(8.0 * source.epsilon * source.mu, 0.35 * grid.box);
}

std::vector<Vec3> ExperimentConfig::probe_points() const {
  ProbeLine line{probes.direction.normalized(), probe_halfspan_effective(),
                 probes.count};
  return line.points();
}

std::vector<double> ExperimentConfig::probe_offsets() const {
  ProbeLine line{probes.direction.normalized(), probe_halfspan_effective(),
                 probes.count};
  return line.offsets();
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> diag;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) diag.push_back(msg);
  };
  try {
    Grid3D check(grid.n, grid.box);
  } catch (const std::exception& e) {
    diag.push_back(e.what());
    return diag;
  }
  require(medium.delta >= 0 && medium.delta < 2,
          "medium.delta must lie in [0,2) (got " +
              format_g17(medium.delta) + ")");
  require(medium.eta > 0 && medium.eta <= 1, "medium.eta must lie in (0,1]");
  require(medium.sigma0 >= 0, "medium.sigma0 must be >= 0");
  require(source.k0 > 0, "source.k0 must be > 0");
  require(source.epsilon > 0 && source.epsilon < 1,
          "source.epsilon must lie in (0,1)");
  require(source.mu > 1, "source.mu must exceed 1");
  require(source.mu * source.mu * source.epsilon < 1,
          "broadband condition mu^2*eps < 1 violated (mu^2*eps = " +
              format_g17(source.mu * source.mu * source.epsilon) + ")");
  require(noise.sigma_n >= 0, "noise.sigma_n must be >= 0");

  const double h = grid.box / grid.n;
  if (medium.sigma0 > 0)
    require(h <= source.epsilon * medium.eta / 2 + 1e-12,
            "grid too coarse for eps*eta (need >= 2 samples per correlation "
            "length)");
  if (noise.sigma_n > 0)
    require(h <= source.epsilon / 2 + 1e-12, "grid too coarse for eps");

  try {
    detector.validate(Grid3D(grid.n, grid.box));
  } catch (const std::exception& e) {
    diag.push_back(e.what());
  }
  if (with_cb) {
    CBConfig c = cb;
    c.epsilon = source.epsilon;
    try {
      c.validate(detector);
    } catch (const std::exception& e) {
      diag.push_back(e.what());
    }
    if (sweep.axis == SweepAxis::cb_gamma) {
      for (double gv : sweep.values) {
        CBConfig cg = c;
        cg.gamma_exp = gv;
        try {
          cg.validate(detector);
        } catch (const std::exception& e) {
          diag.push_back("sweep gamma=" + format_g17(gv) + ": " + e.what());
        }
      }
    }
  }
  require(n_realizations >= 2, "ensemble.n_realizations must be >= 2");
  require(probes.count >= 2, "probes.count must be >= 2");
  if (sweep.axis != SweepAxis::none)
    require(!sweep.values.empty(), "sweep.values must not be empty");
  for (double v : sweep.values) {
    if (sweep.axis == SweepAxis::sigma0)
      require(v >= 0, "sweep sigma0 values must be >= 0");
    if (sweep.axis == SweepAxis::sigma_n)
      require(v >= 0, "sweep sigma_n values must be >= 0");
    if (sweep.axis == SweepAxis::cb_gamma)
      require(v >= 0 && v <= 1, "sweep gamma values must lie in [0,1]");
  }
  return diag;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["grid"] = {{"n", grid.n}, {"box", grid.box}};
  j["medium"] = {{"sigma0", medium.sigma0},
                 {"delta", medium.delta},
                 {"eta", medium.eta},
                 {"spectrum",
                  medium.spectrum == SpectrumKind::gaussian ? "gaussian"
                                                            : "flat"},
                 {"ks", medium.ks},
                 {"S0", medium.S0},
                 {"seed", medium.seed}};
  j["source"] = {{"k0", source.k0},
                 {"epsilon", source.epsilon},
                 {"mu", source.mu}};
  j["noise"] = {{"sigma_n", noise.sigma_n}, {"seed", noise.seed}};
  j["detector"] = {{"center", {detector.center.x, detector.center.y,
                               detector.center.z}},
                   {"side", detector.side}};
  j["cb"] = {{"r0", cb.r0},
             {"gamma", cb.gamma_exp},
             {"window_rolloff", cb.window_rolloff},
             {"n_polar", cb.n_polar},
             {"n_azimuth", cb.n_azimuth},
             {"n_radial", cb.n_radial},
             {"band_mult", cb.band_mult}};
  j["probes"] = {{"halfspan", probes.halfspan},
                 {"count", probes.count},
                 {"direction",
                  {probes.direction.x, probes.direction.y,
                   probes.direction.z}}};
  j["ensemble"] = {{"n_realizations", n_realizations},
                   {"with_wb", with_wb},
                   {"with_cb", with_cb},
                   {"sweep", {{"axis", sweep_axis_name(sweep.axis)},
                              {"values", sweep.values}}}};
  j["output"] = {{"dir", out_dir}};
  j["runtime"] = {{"threads", threads}};
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("grid")) {
    c.grid.n = j["grid"].value("n", c.grid.n);
    c.grid.box = j["grid"].value("box", c.grid.box);
  }
  if (j.contains("medium")) {
    const auto& m = j["medium"];
    c.medium.sigma0 = m.value("sigma0", c.medium.sigma0);
    c.medium.delta = m.value("delta", c.medium.delta);
    c.medium.eta = m.value("eta", c.medium.eta);
    c.medium.ks = m.value("ks", c.medium.ks);
    c.medium.S0 = m.value("S0", c.medium.S0);
    c.medium.seed = m.value("seed", c.medium.seed);
    const std::string sp = m.value("spectrum", std::string("gaussian"));
    if (sp == "gaussian")
      c.medium.spectrum = SpectrumKind::gaussian;
    else if (sp == "flat")
      c.medium.spectrum = SpectrumKind::flat;
    else
      throw std::invalid_argument("unknown medium.spectrum: " + sp);
  }
  if (j.contains("source")) {
    const auto& s = j["source"];
    c.source.k0 = s.value("k0", c.source.k0);
    c.source.epsilon = s.value("epsilon", c.source.epsilon);
    c.source.mu = s.value("mu", c.source.mu);
  }
  if (j.contains("noise")) {
    c.noise.sigma_n = j["noise"].value("sigma_n", c.noise.sigma_n);
    c.noise.seed = j["noise"].value("seed", c.noise.seed);
  }
  if (j.contains("detector")) {
    const auto& d = j["detector"];
    if (d.contains("center")) {
      c.detector.center = {d["center"][0], d["center"][1], d["center"][2]};
    }
    c.detector.side = d.value("side", c.detector.side);
  }
  if (j.contains("cb")) {
    const auto& b = j["cb"];
    c.cb.r0 = b.value("r0", c.cb.r0);
    c.cb.gamma_exp = b.value("gamma", c.cb.gamma_exp);
    c.cb.window_rolloff = b.value("window_rolloff", c.cb.window_rolloff);
    c.cb.n_polar = b.value("n_polar", c.cb.n_polar);
    c.cb.n_azimuth = b.value("n_azimuth", c.cb.n_azimuth);
    c.cb.n_radial = b.value("n_radial", c.cb.n_radial);
    c.cb.band_mult = b.value("band_mult", c.cb.band_mult);
  }
  if (j.contains("probes")) {
    const auto& p = j["probes"];
    c.probes.halfspan = p.value("halfspan", c.probes.halfspan);
    c.probes.count = p.value("count", c.probes.count);
    if (p.contains("direction"))
      c.probes.direction = {p["direction"][0], p["direction"][1],
                            p["direction"][2]};
  }
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    c.n_realizations = e.value("n_realizations", c.n_realizations);
    c.with_wb = e.value("with_wb", c.with_wb);
    c.with_cb = e.value("with_cb", c.with_cb);
    if (e.contains("sweep")) {
      c.sweep.axis =
          sweep_axis_from(e["sweep"].value("axis", std::string("none")));
      if (e["sweep"].contains("values"))
        c.sweep.values = e["sweep"]["values"].get<std::vector<double>>();
    }
  }
  if (j.contains("output")) c.out_dir = j["output"].value("dir", c.out_dir);
  if (j.contains("runtime")) c.threads = j["runtime"].value("threads", 1);
  c.cb.epsilon = c.source.epsilon;
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

// ------------------------------------------------------------------ runner

namespace {

struct SeriesDef {
  std::string name;
  bool cb;
  MeasureSelect sel;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  {
    const std::vector<std::string> diag = cfg.validate();
    if (!diag.empty()) {
      std::string all = "invalid config:";
      for (const auto& d : diag) all += "\n  - " + d;
      throw std::invalid_argument(all);
    }
  }
  fs::create_directories(cfg.out_dir);

  const Grid3D grid(cfg.grid.n, cfg.grid.box);
  const std::vector<Vec3> probe_pts = cfg.probe_points();
  const std::vector<double> offsets = cfg.probe_offsets();
  const std::size_t NP = probe_pts.size();

  const bool use_born = cfg.medium.sigma0 > 0;
  const bool use_noise = cfg.noise.sigma_n > 0;

  std::vector<SeriesDef> defs;
  for (int cb = 0; cb < 2; ++cb) {
    if (cb == 0 && !cfg.with_wb) continue;
    if (cb == 1 && !cfg.with_cb) continue;
    const std::string f = cb ? "CB" : "WB";
    if (use_born)
      defs.push_back({f + ".single", cb == 1, MeasureSelect::mean_born});
    if (use_noise)
      defs.push_back({f + ".noise", cb == 1, MeasureSelect::mean_noise});
    if (use_born && use_noise)
      defs.push_back({f + ".total", cb == 1, MeasureSelect::total});
    if (!use_born && !use_noise)
      defs.push_back({f + ".mean", cb == 1, MeasureSelect::mean_only});
  }

  // sweep points and their physical parameters
  std::vector<double> axis_values = cfg.sweep.values;
  if (cfg.sweep.axis == SweepAxis::none || axis_values.empty())
    axis_values = {0.0};
  struct Point {
    double axis = 0;
    double sigma0 = 0, sigma_n = 0, gamma = 0, Sigma = 0;
  };
  std::vector<Point> pts(axis_values.size());
  for (std::size_t p = 0; p < axis_values.size(); ++p) {
    Point& pt = pts[p];
    pt.axis = axis_values[p];
    pt.sigma0 = cfg.medium.sigma0;
    pt.sigma_n = cfg.noise.sigma_n;
    pt.gamma = cfg.cb.gamma_exp;
    switch (cfg.sweep.axis) {
      case SweepAxis::sigma0: pt.sigma0 = pt.axis; break;
      case SweepAxis::sigma_n: pt.sigma_n = pt.axis; break;
      case SweepAxis::cb_gamma: pt.gamma = pt.axis; break;
      case SweepAxis::none: break;
    }
    MediumSpec ms = cfg.medium;
    ms.sigma0 = pt.sigma0;
    pt.Sigma = ms.sigma0 > 0 ? sigma_quadrature(ms, cfg.source) : 0.0;
  }

  // common direction cap across a gamma sweep: shrink for the largest N_C
  double fixed_shrink = -1.0;
  if (cfg.sweep.axis == SweepAxis::cb_gamma) {
    double rho_max = 0.0;
    for (const Point& pt : pts) {
      CBConfig c = cfg.cb;
      c.gamma_exp = pt.gamma;
      c.epsilon = cfg.source.epsilon;
      rho_max = std::max(rho_max, c.corr_diameter());
    }
    fixed_shrink = 0.5 * rho_max;
  }

  const int R = cfg.n_realizations;
  const std::size_t stride = NP;
  const std::size_t per_real = pts.size() * defs.size() * stride;

  auto realize = [&](int r) -> std::vector<double> {
    std::vector<double> out(per_real, 0.0);
    FieldSet born_raw;
    if (use_born) {
      const RandomField V = sample_field(cfg.medium, grid, cfg.source.epsilon,
                                         static_cast<std::uint64_t>(r));
      MediumSpec unit = cfg.medium;
      unit.sigma0 = 1.0;
      born_raw = born_field(cfg.source, V, unit, 1.0, grid, 0.0);
    }
    FieldSet noise_unit;
    if (use_noise) {
      NoiseSpec ns = cfg.noise;
      ns.seed = mix_seed({cfg.noise.seed, static_cast<std::uint64_t>(r)});
      ns.sigma_n = 1.0;
      noise_unit = detector_noise(ns, cfg.source.epsilon, grid);
    }
    const FieldSet ball = ballistic(cfg.source, 1.0, grid);

    for (std::size_t p = 0; p < pts.size(); ++p) {
      const Point& pt = pts[p];
      FieldSet mean = ball;
      mean.scale(std::exp(-0.5 * pt.Sigma));
      FieldSet born;
      if (use_born) {
        born = born_raw;
        born.scale(pt.sigma0 * std::exp(-0.5 * pt.Sigma));
      }
      FieldSet noise;
      if (use_noise) {
        noise = noise_unit;
        noise.scale(pt.sigma_n);
      }
      const Measurement meas = assemble_measurement(
          std::move(mean), std::move(born), std::move(noise), cfg.detector);

      for (std::size_t d = 0; d < defs.size(); ++d) {
        const SeriesDef& def = defs[d];
        std::vector<double> vals;
        if (!def.cb) {
          vals = wb_image(meas, probe_pts, def.sel).values;
        } else {
          CBConfig c = cfg.cb;
          c.gamma_exp = pt.gamma;
          c.epsilon = cfg.source.epsilon;
          c.fixed_cap_shrink = fixed_shrink;
          vals = cb_image(meas, probe_pts, c, cfg.source, def.sel).values;
        }
        std::copy(vals.begin(), vals.end(),
                  out.begin() + (p * defs.size() + d) * stride);
      }
    }
    return out;
  };

  const std::vector<std::vector<double>> raw =
      run_realizations(R, cfg.threads, realize);

  ExperimentResult res;
  res.probe_offsets = offsets;
  res.points.resize(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    SweepPointResult& pr = res.points[p];
    pr.axis_value = pts[p].axis;
    pr.Sigma = pts[p].Sigma;
    for (std::size_t d = 0; d < defs.size(); ++d) {
      EnsembleAccumulator acc(NP, R);
      std::vector<double> buf(NP);
      for (int r = 0; r < R; ++r) {
        const double* src = raw[r].data() + (p * defs.size() + d) * stride;
        std::copy(src, src + NP, buf.begin());
        acc.set(r, buf);
      }
      SeriesStats ss;
      ss.probes = acc.stats();
      std::vector<double> var(NP);
      for (std::size_t i = 0; i < NP; ++i) var[i] = ss.probes[i].var;
      ss.width = support_width(offsets, var);
      pr.series[defs[d].name] = std::move(ss);
    }
  }

  // sweep-level exponent fits of Var(0) vs axis, with predicted exponents
  auto nearest0 = [&]() {
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < offsets.size(); ++i)
      if (std::abs(offsets[i]) < std::abs(offsets[i0])) i0 = i;
    return i0;
  }();
  if (cfg.sweep.axis != SweepAxis::none && pts.size() >= 4) {
    for (const SeriesDef& def : defs) {
      std::vector<double> xs, ys;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        double x = pts[p].axis;
        if (cfg.sweep.axis == SweepAxis::cb_gamma) {
          CBConfig c = cfg.cb;
          c.gamma_exp = pts[p].gamma;
          c.epsilon = cfg.source.epsilon;
          x = c.N_C();
        }
        xs.push_back(x);
        ys.push_back(res.points[p].series[def.name].probes[nearest0].var);
      }
      try {
        const FitResult fit = fit_exponent(xs, ys);
        const std::string key =
            def.name + ".var0_vs_" +
            (cfg.sweep.axis == SweepAxis::cb_gamma
                 ? "NC"
                 : sweep_axis_name(cfg.sweep.axis));
        res.slopes[key] = fit;
        double expected = 0.0, tol = 0.0;
        if (cfg.sweep.axis == SweepAxis::sigma0 &&
            def.name.ends_with("single")) {
          expected = 2.0;
          tol = 0.2;
        } else if (cfg.sweep.axis == SweepAxis::sigma_n &&
                   def.name.ends_with("noise")) {
          expected = 2.0;
          tol = 0.2;
        } else if (cfg.sweep.axis == SweepAxis::cb_gamma &&
                   def.name == "CB.noise") {
          expected = 4.0;
          tol = 0.4;
        }
        if (tol > 0) {
          CheckResult ck;
          ck.name = key;
          ck.measured = fit.slope;
          ck.expected = expected;
          ck.tol = tol;
          ck.pass = std::abs(fit.slope - expected) <= tol;
          res.checks.push_back(ck);
        }
      } catch (const std::exception&) {
        // not enough usable points for this series; skip the fit
      }
    }
  }

  // ---------------- outputs
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::ostringstream name;
    name << cfg.out_dir << "/probes_point" << p << ".csv";
    CsvWriter csv(name.str());
    std::vector<std::string> head = {"offset"};
    for (const auto& def : defs) {
      head.push_back(def.name + ".mean");
      head.push_back(def.name + ".var");
      head.push_back(def.name + ".var_se");
      head.push_back(def.name + ".snr");
    }
    csv.row(head);
    for (std::size_t i = 0; i < NP; ++i) {
      std::vector<std::string> row = {CsvWriter::num(offsets[i])};
      for (const auto& def : defs) {
        const PointStats& s = res.points[p].series[def.name].probes[i];
        row.push_back(CsvWriter::num(s.mean));
        row.push_back(CsvWriter::num(s.var));
        row.push_back(CsvWriter::num(s.var_se));
        row.push_back(CsvWriter::num(std::isfinite(s.snr) ? s.snr : -1.0));
      }
      csv.row(row);
    }
  }
  {
    CsvWriter csv(cfg.out_dir + "/sweep.csv");
    std::vector<std::string> head = {"axis", "Sigma"};
    for (const auto& def : defs) {
      head.push_back(def.name + ".var0");
      head.push_back(def.name + ".var0_se");
      head.push_back(def.name + ".mean0");
      head.push_back(def.name + ".width");
    }
    csv.row(head);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      std::vector<std::string> row = {CsvWriter::num(pts[p].axis),
                                      CsvWriter::num(pts[p].Sigma)};
      for (const auto& def : defs) {
        const SeriesStats& ss = res.points[p].series[def.name];
        row.push_back(CsvWriter::num(ss.probes[nearest0].var));
        row.push_back(CsvWriter::num(ss.probes[nearest0].var_se));
        row.push_back(CsvWriter::num(ss.probes[nearest0].mean));
        row.push_back(CsvWriter::num(
            std::isfinite(ss.width) ? ss.width : -1.0));
      }
      csv.row(row);
    }
  }
  {
    json summary;
    summary["code_version"] = "wavecb 0.1.0";
    summary["config"] = json::parse(cfg.to_json());
    summary["probe_offsets"] = res.probe_offsets;
    json jpoints = json::array();
    for (std::size_t p = 0; p < pts.size(); ++p) {
      json jp;
      jp["axis_value"] = pts[p].axis;
      jp["Sigma"] = pts[p].Sigma;
      json js;
      for (const auto& [name, ss] : res.points[p].series) {
        js[name] = {{"var0", ss.probes[nearest0].var},
                    {"var0_se", ss.probes[nearest0].var_se},
                    {"mean0", ss.probes[nearest0].mean},
                    {"width", std::isfinite(ss.width) ? ss.width : -1.0}};
      }
      jp["series"] = js;
      jpoints.push_back(jp);
    }
    summary["points"] = jpoints;
    json jslopes;
    for (const auto& [k, f] : res.slopes)
      jslopes[k] = {{"slope", f.slope},
                    {"stderr", f.stderr_slope},
                    {"n_used", f.n_used}};
    summary["slopes"] = jslopes;
    json jchecks = json::array();
    for (const auto& c : res.checks)
      jchecks.push_back({{"name", c.name},
                         {"measured", c.measured},
                         {"expected", c.expected},
                         {"tol", c.tol},
                         {"pass", c.pass}});
    summary["checks"] = jchecks;
    std::ofstream out(cfg.out_dir + "/summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
  }
  return res;
}

// ------------------------------------------------------------------ CLI

int cmd_validate(const std::string& config_path, std::ostream& out) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json_file(config_path);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  const std::vector<std::string> diag = cfg.validate();
  if (diag.empty()) {
    out << "ok\n";
    return 0;
  }
  for (const auto& d : diag) out << "violation: " << d << "\n";
  return 2;
}

int cmd_run(const std::string& config_path, const CliOverrides& ov,
            std::ostream& out) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json_file(config_path);
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.seed) {
      cfg.medium.seed = *ov.seed;
      cfg.noise.seed = mix_seed({*ov.seed, 0x6eull});
    }
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.grid_n) cfg.grid.n = *ov.grid_n;
    if (ov.sweep_axis) cfg.sweep.axis = sweep_axis_from(*ov.sweep_axis);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  {
    const std::vector<std::string> diag = cfg.validate();
    if (!diag.empty()) {
      for (const auto& d : diag) out << "violation: " << d << "\n";
      return 2;
    }
  }
  try {
    const ExperimentResult res = run_experiment(cfg);
    out << "wrote " << cfg.out_dir << "/summary.json (" << res.points.size()
        << " sweep points, " << res.checks.size() << " checks)\n";
    for (const auto& c : res.checks)
      out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured "
          << c.measured << " expected " << c.expected << " +- " << c.tol
          << "\n";
    return 0;
  } catch (const std::exception& e) {
    out << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

int cmd_report(const std::string& results_dir, std::ostream& out) {
  const std::string path = results_dir + "/summary.json";
  if (!fs::exists(results_dir) || fs::is_empty(results_dir)) {
    out << "error: nothing to report in " << results_dir << "\n";
    return 3;
  }
  if (!fs::exists(path)) {
    out << "error: missing " << path << "\n";
    return 3;
  }
  json summary;
  try {
    std::ifstream in(path);
    in >> summary;
  } catch (const std::exception& e) {
    out << "error: cannot parse " << path << ": " << e.what() << "\n";
    return 3;
  }

  out << "run: " << summary.value("code_version", "?") << "\n";
  if (summary.contains("checks")) {
    for (const auto& c : summary["checks"]) {
      out << (c.value("pass", false) ? "[PASS] " : "[FAIL] ")
          << c.value("name", "?") << ": measured "
          << c.value("measured", 0.0) << " expected " << c.value("expected", 0.0)
          << " +- " << c.value("tol", 0.0) << "\n";
    }
    if (summary["checks"].empty()) out << "(no checks in this run)\n";
  }

  // plot-ready series: x, y, yerr per series
  if (summary.contains("points") && !summary["points"].empty()) {
    std::map<std::string, std::vector<std::array<double, 3>>> series;
    for (const auto& jp : summary["points"]) {
      const double x = jp.value("axis_value", 0.0);
      for (const auto& [name, s] : jp["series"].items())
        series[name].push_back(
            {x, s.value("var0", 0.0), s.value("var0_se", 0.0)});
    }
    for (const auto& [name, rows] : series) {
      CsvWriter csv(results_dir + "/plot_" + name + ".csv");
      csv.row({"x", "y", "yerr"});
      for (const auto& r : rows)
        csv.row({CsvWriter::num(r[0]), CsvWriter::num(r[1]),
                 CsvWriter::num(r[2])});
      out << "wrote " << results_dir << "/plot_" << name << ".csv\n";
    }
  }
  return 0;
}

}  // namespace wavecb
