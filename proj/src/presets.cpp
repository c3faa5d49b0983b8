#include "boxsim/presets.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "boxsim/report.hpp"

namespace boxsim {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

// Wedge figure runs use the height-Boltzmann initial distribution; see the
// config reference in the README.
RunSpec wedge_run(double alpha_deg, double w_B, double E_B, double t_f,
                  std::int64_t n, std::uint64_t seed) {
  RunSpec rs;
  rs.trap = TrapSpec::wedge(alpha_deg * kDeg);
  rs.sampler = SamplerSpec{rs.trap, 100e-6, seed, WedgeEnsemble::HeightBoltzmann};
  rs.box = BoxSpec{w_B, E_B, RestTrajectory{0.0, 1.0}};
  rs.n_trials = n;
  rs.t_final = t_f;
  return rs;
}

RunSpec harmonic_run(double w_B, double E_B, double t_f, std::int64_t n,
                     std::uint64_t seed) {
  RunSpec rs;
  rs.trap = TrapSpec::harmonic();
  rs.sampler = SamplerSpec{rs.trap, 100e-6, seed};
  rs.box = BoxSpec{w_B, E_B, RestTrajectory{0.0, 0.5}};
  rs.n_trials = n;
  rs.t_final = t_f;
  return rs;
}

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> g;
  for (double v = from; v <= to + 0.5 * step; v += step) g.push_back(v);
  return g;
}

// Rest-box y_B optimization used by several presets.
SweepResult optimize_rest_y(const RunSpec& base, double y_lo, double y_hi,
                            double step, const EnsembleOptions& opts) {
  SweepSpec sw;
  sw.base = base;
  sw.base.box.trajectory = RestTrajectory{0.0, y_lo};
  sw.axes = {{"y_B", grid(y_lo, y_hi, step)}};
  return scan(sw, opts);
}

struct PresetSink {
  const Preset& preset;
  const PresetOptions& opts;
  CsvWriter csv;
  json params;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  std::int64_t max_anomalies = 0;
  std::int64_t n_trials = 0;

  PresetSink(const Preset& p, const PresetOptions& o,
             std::vector<std::string> cols)
      : preset(p), opts(o), csv(std::move(cols)) {}

  void note(const FractionEstimate& est) {
    max_anomalies = std::max(max_anomalies, est.n_anomalies);
  }

  int finish() {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    const std::string csv_name = preset.name + ".csv";
    csv.write((fs::path(opts.out_dir) / csv_name).string());
    json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["tool"] = "boxsim";
    meta["version"] = kToolVersion;
    meta["command"] = "preset " + preset.name;
    meta["preset"] = {{"name", preset.name},
                      {"description", preset.description},
                      {"n_trials", n_trials},
                      {"master_seed", opts.master_seed},
                      {"parameters", params}};
    meta["outputs"] = {csv_name};
    meta["wall_time_s"] = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    write_json_file((fs::path(opts.out_dir) / (preset.name + ".json")).string(),
                    meta);
    std::printf("wrote %s/%s (%lld trials per point)\n", opts.out_dir.c_str(),
                csv_name.c_str(), (long long)n_trials);
    const double rate = n_trials > 0 ? static_cast<double>(max_anomalies) /
                                           static_cast<double>(n_trials)
                                     : 0.0;
    return rate > 1e-3 ? 3 : 0;
  }
};

// ---- figure presets ------------------------------------------------------

int fig3a(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o, {"alpha_deg", "wB_over_l", "yB_over_l", "F", "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  sink.params = {{"alpha_deg", {30.0, 45.0, 60.0}},
                 {"wB_over_l", {0.1, 0.35}},
                 {"yB_grid", "0.15:1.6:0.05"},
                 {"E_B", 0.1},
                 {"t_f", 20.0}};
  for (double alpha : {30.0, 45.0, 60.0}) {
    for (double wB : {0.1, 0.35}) {
      RunSpec base = wedge_run(alpha, wB, 0.1, 20.0, n, o.master_seed);
      const SweepResult res = optimize_rest_y(base, 0.15, 1.6, 0.05, eo);
      for (const auto& gp : res.grid) {
        sink.csv.add_row_mixed({alpha, wB, gp.values[0], gp.est.fraction,
                                gp.est.std_error});
        sink.note(gp.est);
      }
    }
  }
  return sink.finish();
}

int fig3b(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o,
                  {"alpha_deg", "wB_over_l", "yop_over_l", "yop_err_lo",
                   "yop_err_hi", "F_max", "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  sink.params = {{"alpha_deg", {30.0, 45.0, 60.0}},
                 {"wB_grid", "0.05:0.5:0.05"},
                 {"yB_grid", "0.1:2.0:0.05"},
                 {"E_B", 0.1},
                 {"t_f", 20.0}};
  for (double alpha : {30.0, 45.0, 60.0}) {
    for (double wB : grid(0.05, 0.5, 0.05)) {
      RunSpec base = wedge_run(alpha, wB, 0.1, 20.0, n, o.master_seed);
      const SweepResult res = optimize_rest_y(base, 0.1, 2.0, 0.05, eo);
      sink.csv.add_row_mixed({alpha, wB, res.argmax_values[0],
                              res.error_bars[0].lo, res.error_bars[0].hi,
                              res.f_max, res.best.std_error});
      sink.note(res.best);
    }
  }
  return sink.finish();
}

int fig4(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o,
                  {"alpha_deg", "vBx_over_nu", "vBy_over_nu", "F", "stderr",
                   "round"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  const double yops[] = {0.7, 0.6, 0.75};
  const double alphas[] = {30.0, 45.0, 60.0};
  sink.params = {{"y_op", {0.7, 0.6, 0.75}},
                 {"v_grid", "0:0.16:0.02 + 1 refine round"},
                 {"w_B", 0.35},
                 {"E_B", 0.1},
                 {"t_f", 20.0}};
  json optima = json::array();
  for (int i = 0; i < 3; ++i) {
    RunSpec base = wedge_run(alphas[i], 0.35, 0.1, 20.0, n, o.master_seed);
    base.box.trajectory = WedgeLinearTrajectory{0.0, 0.0, yops[i], 20.0};
    SweepSpec sw;
    sw.base = base;
    sw.axes = {{"v_Bx", grid(0.0, 0.16, 0.02)}, {"v_By", grid(0.0, 0.16, 0.02)}};
    sw.refine_rounds = 1;
    const SweepResult res = optimize_2d_velocity(sw, eo);
    for (const auto& gp : res.evaluated) {
      sink.csv.add_row_mixed({alphas[i], gp.values[0], gp.values[1],
                              gp.est.fraction, gp.est.std_error, gp.round});
      sink.note(gp.est);
    }
    optima.push_back({{"alpha_deg", alphas[i]},
                      {"v_Bx", res.argmax_values[0]},
                      {"v_By", res.argmax_values[1]},
                      {"F", res.f_max}});
  }
  sink.params["optima"] = optima;
  return sink.finish();
}

// Shared implementation for the per-angle trajectory-family comparisons.
int fig_traj(const Preset& p, const PresetOptions& o, double alpha_deg,
             double v, double y_W0, double omega_W) {
  PresetSink sink(p, o,
                  {"alpha_deg", "tf_over_tau", "wB_over_l", "trajectory",
                   "yop_over_l", "F", "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  sink.params = {{"alpha_deg", alpha_deg}, {"v", v},
                 {"y_W0", y_W0},           {"omega_W", omega_W},
                 {"E_B", 0.1},             {"wB_grid", "0.05:0.5:0.05"}};
  const double alpha = alpha_deg * kDeg;
  for (double wB : grid(0.05, 0.5, 0.05)) {
    // rest optimum at t_f = 20 reused for both final times
    RunSpec base20 = wedge_run(alpha_deg, wB, 0.1, 20.0, n, o.master_seed);
    const double seed_y = wedge_rest_optimum_seed(wB, alpha);
    const SweepResult rest = optimize_rest_y(
        base20, std::max(0.05, seed_y - 0.45), seed_y + 0.5, 0.05, eo);
    const double y_op = rest.argmax_values[0];
    for (double tf : {20.0, 40.0}) {
      RunSpec rs = wedge_run(alpha_deg, wB, 0.1, tf, n, o.master_seed);
      auto emit = [&](const char* name, const FractionEstimate& est) {
        sink.csv.add_row_mixed({alpha_deg, tf, wB, name, y_op, est.fraction,
                                est.std_error});
        sink.note(est);
      };
      if (tf == 20.0) {
        emit("rest", rest.best);
      } else {
        rs.box.trajectory = RestTrajectory{0.0, y_op};
        emit("rest", run_ensemble(rs, eo));
      }
      rs.box.trajectory = WedgeSideParallelTrajectory{v, y_op, alpha, wB};
      emit("wedge_side_parallel", run_ensemble(rs, eo));
      rs.box.trajectory = WedgeAnalyticTrajectory{v, alpha, wB};
      emit("wedge_analytic", run_ensemble(rs, eo));
      rs.box.trajectory = WriggleTrajectory{y_W0, omega_W, alpha, tf, wB};
      emit("wriggle", run_ensemble(rs, eo));
    }
  }
  return sink.finish();
}

int fig8(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o,
                  {"wB_over_l", "trajectory", "y_over_l", "vBx_over_nu", "F",
                   "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  sink.params = {{"wB_grid", "0.05:0.5:0.05"},
                 {"E_B", 0.1},
                 {"t_f", 60.0},
                 {"helix", {{"x_H", 1.9}, {"omega_H", 0.1}}}};
  for (double wB : grid(0.05, 0.5, 0.05)) {
    RunSpec base = harmonic_run(wB, 0.1, 60.0, n, o.master_seed);
    // resting box
    const SweepResult rest = optimize_rest_y(base, 0.0, 1.4, 0.05, eo);
    sink.csv.add_row_mixed({wB, "rest", rest.argmax_values[0], 0.0,
                            rest.f_max, rest.best.std_error});
    sink.note(rest.best);
    // optimized linear box around the fitted optimum
    const double v0 = 0.025 + 0.25 * wB;
    SweepSpec sw;
    sw.base = base;
    sw.base.box.trajectory = HarmonicLinearTrajectory{v0, 0.55, 60.0};
    sw.axes = {{"y_c", grid(0.35, 0.75, 0.1)},
               {"v_Bx", grid(std::max(0.005, v0 - 0.03), v0 + 0.03, 0.01)}};
    sw.refine_rounds = 1;
    const SweepResult lin = scan(sw, eo);
    sink.csv.add_row_mixed({wB, "harmonic_linear", lin.argmax_values[0],
                            lin.argmax_values[1], lin.f_max,
                            lin.best.std_error});
    sink.note(lin.best);
    // fitted analytic trajectory and the helix
    RunSpec rs = base;
    rs.box.trajectory = HarmonicAnalyticTrajectory{wB, 60.0};
    const auto ea = run_ensemble(rs, eo);
    sink.csv.add_row_mixed({wB, "harmonic_analytic", 0.55, v0, ea.fraction,
                            ea.std_error});
    sink.note(ea);
    rs.box.trajectory = HelixTrajectory{1.9, 0.1, 60.0};
    const auto eh = run_ensemble(rs, eo);
    sink.csv.add_row_mixed({wB, "helix", 0.0, 0.0, eh.fraction, eh.std_error});
    sink.note(eh);
  }
  return sink.finish();
}

int fig9(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o, {"yc_over_l", "vBx_over_nu", "F", "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  sink.params = {{"w_B", 0.2},      {"E_B", 0.1},
                 {"t_f", 60.0},     {"yc_grid", "0:1.2:0.05"},
                 {"v_grid", "0:0.2:0.01"}};
  RunSpec base = harmonic_run(0.2, 0.1, 60.0, n, o.master_seed);
  base.box.trajectory = HarmonicLinearTrajectory{0.05, 0.5, 60.0};
  SweepSpec sw;
  sw.base = base;
  sw.axes = {{"y_c", grid(0.0, 1.2, 0.05)}, {"v_Bx", grid(0.0, 0.2, 0.01)}};
  const SweepResult res = scan(sw, eo);
  for (const auto& gp : res.grid) {
    sink.csv.add_row_mixed({gp.values[0], gp.values[1], gp.est.fraction,
                            gp.est.std_error});
    sink.note(gp.est);
  }
  sink.params["optimum"] = {{"y_c", res.argmax_values[0]},
                            {"v_Bx", res.argmax_values[1]},
                            {"F", res.f_max}};
  return sink.finish();
}

int fig10(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o, {"wB_over_l", "EB_over_Ei", "trajectory", "F", "stderr"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  const std::vector<double> ebs = {0.025, 0.05, 0.1, 0.2, 0.4, 0.8};
  sink.params = {{"wB_over_l", {0.2, 0.35}},
                 {"EB_grid", ebs},
                 {"t_f", 60.0},
                 {"helix", {{"x_H", 1.9}, {"omega_H", 0.1}}}};
  for (double wB : {0.2, 0.35}) {
    RunSpec base = harmonic_run(wB, 0.1, 60.0, n, o.master_seed);
    // rest: one 2D scan over (E_B, y_B); report the per-threshold optimum
    SweepSpec sw;
    sw.base = base;
    sw.base.box.trajectory = RestTrajectory{0.0, 0.5};
    sw.axes = {{"E_B", ebs}, {"y_B", grid(0.1, 1.2, 0.05)}};
    const SweepResult rest = scan(sw, eo);
    const std::size_t ny = rest.axes[1].grid.size();
    for (std::size_t ie = 0; ie < ebs.size(); ++ie) {
      const GridPointResult* best = nullptr;
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const auto& gp = rest.grid[ie * ny + iy];
        if (!best || gp.est.fraction > best->est.fraction) best = &gp;
      }
      sink.csv.add_row_mixed({wB, ebs[ie], "rest", best->est.fraction,
                              best->est.std_error});
      sink.note(best->est);
    }
    // moving boxes: one shared pass per trajectory across all thresholds
    for (const char* family : {"harmonic_analytic", "helix"}) {
      SweepSpec sm;
      sm.base = base;
      sm.base.box.trajectory =
          family == std::string("harmonic_analytic")
              ? BoxTrajectory(HarmonicAnalyticTrajectory{wB, 60.0})
              : BoxTrajectory(HelixTrajectory{1.9, 0.1, 60.0});
      sm.axes = {{"E_B", ebs}};
      const SweepResult res = scan(sm, eo);
      for (const auto& gp : res.grid) {
        sink.csv.add_row_mixed({wB, gp.values[0], family, gp.est.fraction,
                                gp.est.std_error});
        sink.note(gp.est);
      }
    }
  }
  return sink.finish();
}

int compare_preset(const Preset& p, const PresetOptions& o) {
  PresetSink sink(p, o, {"trajectory", "F", "stderr", "significant_vs_best"});
  const std::int64_t n = o.n_trials > 0 ? o.n_trials : p.default_trials;
  sink.n_trials = n;
  EnsembleOptions eo{o.threads, false};
  const double alpha = 30.0 * kDeg;
  const double wB = 0.35, yop = 0.7;
  sink.params = {{"alpha_deg", 30.0}, {"w_B", wB},   {"E_B", 0.1},
                 {"t_f", 20.0},       {"y_op", yop}, {"v", 0.13}};
  RunSpec base = wedge_run(30.0, wB, 0.1, 20.0, n, o.master_seed);
  std::vector<RunSpec> specs;
  auto add = [&](BoxTrajectory tr) {
    RunSpec rs = base;
    rs.box.trajectory = std::move(tr);
    specs.push_back(rs);
  };
  add(RestTrajectory{0.0, yop});
  add(WedgeSideParallelTrajectory{0.13, yop, alpha, wB});
  add(WedgeAnalyticTrajectory{0.13, alpha, wB});
  add(WriggleTrajectory{2.0, 0.25, alpha, 20.0, wB});
  const auto cmp = compare_trajectories(specs, eo);
  for (const auto& row : cmp.rows) {
    sink.csv.add_row_mixed({row.family, row.est.fraction, row.est.std_error,
                            row.significant_vs_best});
    sink.note(row.est);
  }
  return sink.finish();
}

std::vector<Preset> build_presets() {
  std::vector<Preset> base = {
      {"fig3a-rest-scan",
       "wedge rest-box F(y_B) scans, alpha in {30,45,60} deg, w_B in {0.1,0.35}",
       100000, fig3a},
      {"fig3b-rest-optimum",
       "wedge rest-box optimum y_op(w_B) with error bars, three angles", 100000,
       fig3b},
      {"fig4-velocity-scan",
       "wedge linear-box F(v_Bx,v_By) scans at w_B=0.35 with one refine round",
       100000, fig4},
      {"fig5-trajectories-a30",
       "wedge 30 deg: rest/side-parallel/analytic/wriggle F(w_B) at t_f 20 and 40",
       100000,
       [](const Preset& p, const PresetOptions& o) {
         return fig_traj(p, o, 30.0, 0.13, 2.0, 0.25);
       }},
      {"fig6-trajectories-a45",
       "wedge 45 deg: rest/side-parallel/analytic/wriggle F(w_B) at t_f 20 and 40",
       100000,
       [](const Preset& p, const PresetOptions& o) {
         return fig_traj(p, o, 45.0, 0.11, 1.5, 0.2);
       }},
      {"fig7-trajectories-a60",
       "wedge 60 deg: rest/side-parallel/analytic/wriggle F(w_B) at t_f 20 and 40",
       100000,
       [](const Preset& p, const PresetOptions& o) {
         return fig_traj(p, o, 60.0, 0.11, 1.5, 0.2);
       }},
      {"fig8-harmonic-families",
       "harmonic: rest/optimized-linear/analytic/helix F(w_B) at t_f=60 (slow)",
       100000, fig8},
      {"fig9-harmonic-linear",
       "harmonic linear-box F(y_c, v_Bx) surface at w_B=0.2, t_f=60", 100000,
       fig9},
      {"fig10-threshold-scan",
       "harmonic F(E_B) for rest/analytic/helix at w_B in {0.2,0.35}, t_f=60",
       100000, fig10},
      {"compare-trajectories",
       "wedge 30 deg, w_B=0.35: ranked trajectory comparison table", 100000,
       compare_preset},
  };
  std::vector<Preset> all;
  for (const Preset& p : base) {
    all.push_back(p);
    Preset paper = p;
    paper.name += "-paper";
    paper.description += " [paper scale, 10^6 trials]";
    paper.default_trials = 1000000;
    all.push_back(paper);
  }
  return all;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

int run_preset(const std::string& name, const PresetOptions& opts) {
  const Preset* p = find_preset(name);
  if (!p) {
    std::fprintf(stderr, "unknown preset '%s'; see list-presets\n", name.c_str());
    return 1;
  }
  return p->run(*p, opts);
}

}  // namespace boxsim
