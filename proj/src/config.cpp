#include "boxsim/config.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "boxsim/report.hpp"

namespace boxsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw std::invalid_argument(where + ": " + msg);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) fail(where + "/" + item.key(), "unknown field");
  }
}

double get_num(const json& j, const std::string& where, const char* key,
               std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    fail(where + "/" + key, "required field missing");
  }
  if (!j.at(key).is_number()) fail(where + "/" + key, "must be a number");
  return j.at(key).get<double>();
}

std::int64_t get_int(const json& j, const std::string& where, const char* key,
                     std::optional<std::int64_t> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    fail(where + "/" + key, "required field missing");
  }
  if (!j.at(key).is_number_integer()) fail(where + "/" + key, "must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string get_str(const json& j, const std::string& where, const char* key,
                    std::optional<std::string> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    fail(where + "/" + key, "required field missing");
  }
  if (!j.at(key).is_string()) fail(where + "/" + key, "must be a string");
  return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& where, const char* key,
              bool def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) fail(where + "/" + key, "must be a boolean");
  return j.at(key).get<bool>();
}

}  // namespace

BoxTrajectory parse_trajectory(const json& j, const TrapSpec& trap, double w_B,
                               double default_t_f, const std::string& where) {
  const std::string family = get_str(j, where, "family");
  const double trap_alpha = trap.kind == TrapKind::Wedge ? trap.alpha : 0.0;
  if (family == "rest") {
    check_keys(j, where, {"family", "x_B", "y_B"});
    return RestTrajectory{get_num(j, where, "x_B", 0.0),
                          get_num(j, where, "y_B")};
  }
  if (family == "wedge_linear") {
    check_keys(j, where, {"family", "v_Bx", "v_By", "y_op", "t_f"});
    return WedgeLinearTrajectory{get_num(j, where, "v_Bx"),
                                 get_num(j, where, "v_By"),
                                 get_num(j, where, "y_op"),
                                 get_num(j, where, "t_f", default_t_f)};
  }
  if (family == "wedge_side_parallel") {
    check_keys(j, where, {"family", "v", "y_op", "alpha"});
    return WedgeSideParallelTrajectory{get_num(j, where, "v"),
                                       get_num(j, where, "y_op"),
                                       get_num(j, where, "alpha", trap_alpha),
                                       w_B};
  }
  if (family == "wedge_analytic") {
    check_keys(j, where, {"family", "v", "alpha"});
    return WedgeAnalyticTrajectory{get_num(j, where, "v"),
                                   get_num(j, where, "alpha", trap_alpha), w_B};
  }
  if (family == "wriggle") {
    check_keys(j, where, {"family", "y_W0", "omega_W", "alpha", "t_f"});
    return WriggleTrajectory{get_num(j, where, "y_W0"),
                             get_num(j, where, "omega_W"),
                             get_num(j, where, "alpha", trap_alpha),
                             get_num(j, where, "t_f", default_t_f), w_B};
  }
  if (family == "harmonic_linear") {
    check_keys(j, where, {"family", "v_Bx", "y_c", "t_f"});
    return HarmonicLinearTrajectory{get_num(j, where, "v_Bx"),
                                    get_num(j, where, "y_c"),
                                    get_num(j, where, "t_f", default_t_f)};
  }
  if (family == "harmonic_analytic") {
    check_keys(j, where, {"family", "t_f"});
    return HarmonicAnalyticTrajectory{w_B, get_num(j, where, "t_f", default_t_f)};
  }
  if (family == "helix") {
    check_keys(j, where, {"family", "x_H", "omega_H", "t_f"});
    return HelixTrajectory{get_num(j, where, "x_H"),
                           get_num(j, where, "omega_H"),
                           get_num(j, where, "t_f", default_t_f)};
  }
  fail(where + "/family", "unknown trajectory family '" + family + "'");
}

json trajectory_to_json(const BoxTrajectory& traj) {
  json j;
  j["family"] = trajectory_family(traj);
  std::visit(
      [&](const auto& tr) {
        if constexpr (requires(decltype(tr) t) { t.x_B; }) j["x_B"] = tr.x_B;
        if constexpr (requires(decltype(tr) t) { t.y_B; }) j["y_B"] = tr.y_B;
        if constexpr (requires(decltype(tr) t) { t.v_Bx; }) j["v_Bx"] = tr.v_Bx;
        if constexpr (requires(decltype(tr) t) { t.v_By; }) j["v_By"] = tr.v_By;
        if constexpr (requires(decltype(tr) t) { t.y_op; }) j["y_op"] = tr.y_op;
        if constexpr (requires(decltype(tr) t) { t.t_f; }) j["t_f"] = tr.t_f;
        if constexpr (requires(decltype(tr) t) { t.v; }) j["v"] = tr.v;
        if constexpr (requires(decltype(tr) t) { t.alpha; }) j["alpha"] = tr.alpha;
        if constexpr (requires(decltype(tr) t) { t.y_W0; }) j["y_W0"] = tr.y_W0;
        if constexpr (requires(decltype(tr) t) { t.omega_W; }) j["omega_W"] = tr.omega_W;
        if constexpr (requires(decltype(tr) t) { t.y_c; }) j["y_c"] = tr.y_c;
        if constexpr (requires(decltype(tr) t) { t.x_H; }) j["x_H"] = tr.x_H;
        if constexpr (requires(decltype(tr) t) { t.omega_H; }) j["omega_H"] = tr.omega_H;
        if constexpr (requires(decltype(tr) t) { t.w_B; }) j["w_B"] = tr.w_B;
      },
      traj);
  return j;
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "", {"trap", "box", "run", "sweep", "compare", "report", "output"});
  if (!j.contains("trap")) fail("/trap", "required block missing");
  if (!j.contains("box")) fail("/box", "required block missing");
  if (!j.contains("run")) fail("/run", "required block missing");

  ScenarioConfig cfg;

  // trap
  const json& jt = j.at("trap");
  check_keys(jt, "/trap",
             {"kind", "alpha_deg", "omega_rad_s", "mass_kg", "temperature_K",
              "gravity_m_s2", "wedge_ensemble"});
  const std::string kind = get_str(jt, "/trap", "kind");
  PhysicalParams phys;
  phys.mass = get_num(jt, "/trap", "mass_kg", phys.mass);
  phys.temperature_i = get_num(jt, "/trap", "temperature_K", phys.temperature_i);
  phys.gravity = get_num(jt, "/trap", "gravity_m_s2", phys.gravity);
  phys.omega = get_num(jt, "/trap", "omega_rad_s", phys.omega);
  if (!(phys.mass > 0.0)) fail("/trap/mass_kg", "must be > 0");
  if (!(phys.temperature_i > 0.0)) fail("/trap/temperature_K", "must be > 0");

  WedgeEnsemble ensemble = WedgeEnsemble::Canonical;
  const std::string ens =
      get_str(jt, "/trap", "wedge_ensemble", std::string("canonical"));
  if (ens == "height_boltzmann")
    ensemble = WedgeEnsemble::HeightBoltzmann;
  else if (ens != "canonical")
    fail("/trap/wedge_ensemble", "must be 'canonical' or 'height_boltzmann'");

  double alpha_deg = 0.0;
  if (kind == "wedge") {
    alpha_deg = get_num(jt, "/trap", "alpha_deg");
    if (!(alpha_deg > 0.0) || !(alpha_deg < 90.0))
      fail("/trap/alpha_deg", "must be in (0, 90)");
    if (!(phys.gravity > 0.0)) fail("/trap/gravity_m_s2", "must be > 0");
    cfg.run.trap = TrapSpec::wedge(alpha_deg * std::numbers::pi / 180.0, phys);
  } else if (kind == "harmonic") {
    if (!(phys.omega > 0.0)) fail("/trap/omega_rad_s", "must be > 0");
    cfg.run.trap = TrapSpec::harmonic(phys);
  } else {
    fail("/trap/kind", "must be 'wedge' or 'harmonic'");
  }

  // box
  const json& jb = j.at("box");
  check_keys(jb, "/box", {"w_B", "E_B", "speed_limit", "trajectory"});
  cfg.run.box.half_width = get_num(jb, "/box", "w_B");
  cfg.run.box.threshold = get_num(jb, "/box", "E_B");
  if (!(cfg.run.box.half_width > 0.0)) fail("/box/w_B", "must be > 0");
  if (!(cfg.run.box.threshold > 0.0)) fail("/box/E_B", "must be > 0");
  cfg.speed_limit = get_num(jb, "/box", "speed_limit", kDefaultSpeedLimit);
  if (!jb.contains("trajectory")) fail("/box/trajectory", "required field missing");

  // run
  const json& jr = j.at("run");
  check_keys(jr, "/run",
             {"n_trials", "t_f", "check_interval", "master_seed", "threads",
              "histogram"});
  cfg.run.n_trials = get_int(jr, "/run", "n_trials", 100000);
  cfg.run.t_final = get_num(jr, "/run", "t_f");
  cfg.run.check_interval = get_num(jr, "/run", "check_interval", 0.01);
  const std::int64_t seed = get_int(jr, "/run", "master_seed", 0xC0FFEE);
  cfg.threads = static_cast<int>(get_int(jr, "/run", "threads", 0));
  cfg.histogram = get_bool(jr, "/run", "histogram", false);
  if (cfg.run.n_trials < 1) fail("/run/n_trials", "must be >= 1");
  if (!(cfg.run.t_final > 0.0)) fail("/run/t_f", "must be > 0");
  if (!(cfg.run.check_interval > 0.0)) fail("/run/check_interval", "must be > 0");
  if (cfg.threads < 0) fail("/run/threads", "must be >= 0");

  cfg.run.box.trajectory =
      parse_trajectory(jb.at("trajectory"), cfg.run.trap, cfg.run.box.half_width,
                       cfg.run.t_final, "/box/trajectory");
  cfg.run.sampler = SamplerSpec{cfg.run.trap, phys.temperature_i,
                                static_cast<std::uint64_t>(seed), ensemble};
  try {
    validate_run_spec(cfg.run);
  } catch (const std::invalid_argument& e) {
    fail("/run", e.what());
  }
  if (std::holds_alternative<WriggleTrajectory>(cfg.run.box.trajectory)) {
    const double vmax = max_trajectory_speed(cfg.run.box.trajectory, cfg.run.t_final);
    if (vmax > cfg.speed_limit)
      fail("/box/trajectory",
           "wriggle box speed " + CsvWriter::format_number(vmax) +
               " exceeds speed_limit " + CsvWriter::format_number(cfg.speed_limit));
  }

  // sweep
  if (j.contains("sweep")) {
    const json& js = j.at("sweep");
    check_keys(js, "/sweep", {"refine_rounds", "budget", "axes"});
    cfg.refine_rounds = static_cast<int>(get_int(js, "/sweep", "refine_rounds", 0));
    if (cfg.refine_rounds < 0) fail("/sweep/refine_rounds", "must be >= 0");
    cfg.sweep_budget = get_int(js, "/sweep", "budget", cfg.sweep_budget);
    if (js.contains("axes")) {
      if (!js.at("axes").is_array()) fail("/sweep/axes", "must be an array");
      int idx = 0;
      for (const json& ja : js.at("axes")) {
        const std::string where = "/sweep/axes/" + std::to_string(idx++);
        check_keys(ja, where, {"param", "from", "to", "step", "values"});
        AxisSpec ax;
        ax.param = get_str(ja, where, "param");
        if (ja.contains("values")) {
          if (!ja.at("values").is_array()) fail(where + "/values", "must be an array");
          for (const json& v : ja.at("values")) {
            if (!v.is_number()) fail(where + "/values", "must contain numbers");
            ax.grid.push_back(v.get<double>());
          }
        } else {
          const double from = get_num(ja, where, "from");
          const double to = get_num(ja, where, "to");
          const double step = get_num(ja, where, "step");
          if (!(step > 0.0)) fail(where + "/step", "must be > 0");
          if (to < from) fail(where + "/to", "must be >= from");
          for (double v = from; v <= to + 0.5 * step; v += step)
            ax.grid.push_back(v);
        }
        if (ax.grid.empty()) fail(where, "empty grid");
        if (!std::is_sorted(ax.grid.begin(), ax.grid.end()))
          fail(where + "/values", "must be ascending");
        try {
          RunSpec probe = cfg.run;
          set_param(probe, ax.param, ax.grid.front());
        } catch (const std::invalid_argument& e) {
          fail(where + "/param", e.what());
        }
        cfg.axes.push_back(std::move(ax));
      }
    }
  }

  // compare
  if (j.contains("compare")) {
    if (!j.at("compare").is_array()) fail("/compare", "must be an array");
    if (!cfg.axes.empty())
      fail("/compare", "cannot combine a sweep with a comparison");
    int idx = 0;
    for (const json& jc : j.at("compare")) {
      cfg.compare.push_back(parse_trajectory(jc, cfg.run.trap,
                                             cfg.run.box.half_width,
                                             cfg.run.t_final,
                                             "/compare/" + std::to_string(idx++)));
    }
  }

  // report
  if (j.contains("report")) {
    const json& jp = j.at("report");
    check_keys(jp, "/report", {"cooling", "epsilon"});
    cfg.report.cooling = get_bool(jp, "/report", "cooling", false);
    cfg.report.epsilon = get_num(jp, "/report", "epsilon", kDefaultEpsilon);
    if (!(cfg.report.epsilon > 0.0) || !(cfg.report.epsilon < 1.0))
      fail("/report/epsilon", "must be in (0, 1)");
  }

  // output
  if (j.contains("output")) {
    const json& jo = j.at("output");
    check_keys(jo, "/output", {"dir", "csv", "metadata", "gnuplot"});
    cfg.output.dir = get_str(jo, "/output", "dir", cfg.output.dir);
    cfg.output.csv = get_str(jo, "/output", "csv", cfg.output.csv);
    cfg.output.metadata = get_str(jo, "/output", "metadata", cfg.output.metadata);
    cfg.output.gnuplot = get_bool(jo, "/output", "gnuplot", false);
  }

  // resolved echo with all defaults materialized
  json echo;
  echo["trap"]["kind"] = kind;
  if (kind == "wedge") {
    echo["trap"]["alpha_deg"] = alpha_deg;
    echo["trap"]["gravity_m_s2"] = phys.gravity;
  } else {
    echo["trap"]["omega_rad_s"] = phys.omega;
  }
  echo["trap"]["mass_kg"] = phys.mass;
  echo["trap"]["temperature_K"] = phys.temperature_i;
  echo["trap"]["wedge_ensemble"] =
      ensemble == WedgeEnsemble::Canonical ? "canonical" : "height_boltzmann";
  echo["trap"]["scales"] = {{"length_m", cfg.run.trap.scales.length},
                            {"velocity_m_s", cfg.run.trap.scales.velocity},
                            {"time_s", cfg.run.trap.scales.time},
                            {"energy_J", cfg.run.trap.scales.energy}};
  echo["box"] = {{"w_B", cfg.run.box.half_width},
                 {"E_B", cfg.run.box.threshold},
                 {"speed_limit", cfg.speed_limit},
                 {"trajectory", trajectory_to_json(cfg.run.box.trajectory)}};
  echo["run"] = {{"n_trials", cfg.run.n_trials},
                 {"t_f", cfg.run.t_final},
                 {"check_interval", cfg.run.check_interval},
                 {"master_seed", seed},
                 {"threads", cfg.threads},
                 {"histogram", cfg.histogram}};
  if (!cfg.axes.empty()) {
    json axes = json::array();
    for (const auto& ax : cfg.axes)
      axes.push_back({{"param", ax.param}, {"values", ax.grid}});
    echo["sweep"] = {{"refine_rounds", cfg.refine_rounds},
                     {"budget", cfg.sweep_budget},
                     {"axes", axes}};
  }
  if (!cfg.compare.empty()) {
    json cj = json::array();
    for (const auto& tr : cfg.compare) cj.push_back(trajectory_to_json(tr));
    echo["compare"] = cj;
  }
  echo["report"] = {{"cooling", cfg.report.cooling},
                    {"epsilon", cfg.report.epsilon}};
  echo["output"] = {{"dir", cfg.output.dir},
                    {"csv", cfg.output.csv},
                    {"metadata", cfg.output.metadata},
                    {"gnuplot", cfg.output.gnuplot}};
  cfg.resolved = std::move(echo);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  json j = json::parse(is);  // parse_error carries the byte offset
  return parse_config(j);
}

namespace {

std::string output_path(const ScenarioConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output.dir) / name).string();
}

json estimate_to_json(const FractionEstimate& est) {
  return {{"F", est.fraction},
          {"stderr", est.std_error},
          {"n_caught", est.n_caught},
          {"n_trials", est.n_trials},
          {"n_anomalies", est.n_anomalies}};
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, const std::string& command_line) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output.dir);

  EnsembleOptions opts;
  opts.n_workers = cfg.threads;
  opts.record_histogram = cfg.histogram;

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["tool"] = "boxsim";
  meta["version"] = kToolVersion;
  meta["command"] = command_line;
  meta["config"] = cfg.resolved;

  std::int64_t max_anomalies = 0;
  std::vector<std::string> outputs;

  if (!cfg.compare.empty()) {
    std::vector<RunSpec> specs;
    for (const auto& traj : cfg.compare) {
      RunSpec rs = cfg.run;
      rs.box.trajectory = traj;
      specs.push_back(rs);
    }
    const auto cmp = compare_trajectories(specs, opts);
    CsvWriter csv({"trajectory", "F", "stderr", "n_caught", "significant_vs_best"});
    json rows = json::array();
    for (const auto& row : cmp.rows) {
      csv.add_row_mixed({row.family, row.est.fraction, row.est.std_error,
                         row.est.n_caught, row.significant_vs_best});
      json r = estimate_to_json(row.est);
      r["trajectory"] = row.family;
      r["significant_vs_best"] = row.significant_vs_best;
      rows.push_back(r);
      max_anomalies = std::max(max_anomalies, row.est.n_anomalies);
    }
    csv.write(output_path(cfg, cfg.output.csv));
    outputs.push_back(cfg.output.csv);
    if (cfg.output.gnuplot) {
      const std::string dat =
          std::filesystem::path(cfg.output.csv).stem().string() + ".dat";
      csv.write_gnuplot(output_path(cfg, dat));
      outputs.push_back(dat);
    }
    meta["results"]["comparison"] = rows;
    std::printf("comparison (best first):\n");
    for (const auto& row : cmp.rows)
      std::printf("  %-20s F = %.6f +- %.6f%s\n", row.family.c_str(),
                  row.est.fraction, row.est.std_error,
                  row.significant_vs_best ? "  (significantly below best)" : "");
  } else if (!cfg.axes.empty()) {
    SweepSpec sw;
    sw.base = cfg.run;
    sw.axes = cfg.axes;
    sw.refine_rounds = cfg.refine_rounds;
    sw.max_budget = cfg.sweep_budget;
    sw.wriggle_speed_limit = cfg.speed_limit;
    const SweepResult res = scan(sw, opts);

    std::vector<std::string> cols;
    for (const auto& ax : res.axes) cols.push_back(ax.param);
    cols.insert(cols.end(), {"F", "stderr", "n_caught"});
    CsvWriter csv(cols);
    for (const auto& gp : res.grid) {
      std::vector<json> cells;
      for (double v : gp.values) cells.emplace_back(v);
      cells.emplace_back(gp.est.fraction);
      cells.emplace_back(gp.est.std_error);
      cells.emplace_back(gp.est.n_caught);
      csv.add_row_mixed(cells);
      max_anomalies = std::max(max_anomalies, gp.est.n_anomalies);
    }
    csv.write(output_path(cfg, cfg.output.csv));
    outputs.push_back(cfg.output.csv);
    if (cfg.output.gnuplot) {
      const std::string dat =
          std::filesystem::path(cfg.output.csv).stem().string() + ".dat";
      csv.write_gnuplot(output_path(cfg, dat));
      outputs.push_back(dat);
    }
    json jb;
    for (std::size_t a = 0; a < res.axes.size(); ++a) {
      jb[res.axes[a].param] = {{"argmax", res.argmax_values[a]},
                               {"bar_lo", res.error_bars[a].lo},
                               {"bar_hi", res.error_bars[a].hi}};
    }
    meta["results"]["sweep"] = {{"F_max", res.f_max},
                                {"best", estimate_to_json(res.best)},
                                {"axes", jb},
                                {"rounds", res.rounds.size()}};
    std::printf("sweep optimum: F = %.6f at", res.f_max);
    for (std::size_t a = 0; a < res.axes.size(); ++a)
      std::printf(" %s = %g [%g, %g]", res.axes[a].param.c_str(),
                  res.argmax_values[a], res.error_bars[a].lo,
                  res.error_bars[a].hi);
    std::printf("\n");
  } else {
    const FractionEstimate est = run_ensemble(cfg.run, opts);
    max_anomalies = est.n_anomalies;
    CsvWriter csv({"trajectory", "F", "stderr", "n_caught", "n_trials",
                   "n_anomalies"});
    csv.add_row_mixed({trajectory_family(cfg.run.box.trajectory), est.fraction,
                       est.std_error, est.n_caught, est.n_trials,
                       est.n_anomalies});
    csv.write(output_path(cfg, cfg.output.csv));
    outputs.push_back(cfg.output.csv);
    meta["results"]["run"] = estimate_to_json(est);
    if (est.catch_times) {
      const auto& h = *est.catch_times;
      CsvWriter hist({"bin_lo", "bin_hi", "count"});
      for (std::size_t b = 0; b < h.bins.size(); ++b)
        hist.add_row_mixed({h.t_max * b / 50.0, h.t_max * (b + 1) / 50.0,
                            h.bins[b]});
      const std::string hist_name =
          std::filesystem::path(cfg.output.csv).stem().string() + "_hist.csv";
      hist.write(output_path(cfg, hist_name));
      outputs.push_back(hist_name);
    }
    if (cfg.report.cooling) {
      const CoolingReport rep = cooling_efficiency(est, cfg.run.box,
                                                   cfg.run.sampler,
                                                   cfg.report.epsilon);
      meta["results"]["cooling"] = {
          {"F", rep.fraction},          {"A_i", rep.area_initial},
          {"A_B", rep.area_box},        {"EB_over_Ei", rep.threshold_ratio},
          {"epsilon", rep.epsilon},     {"eta", std::isfinite(rep.eta)
                                                    ? json(rep.eta)
                                                    : json("-inf")},
          {"T_f_K", cfg.run.box.threshold * cfg.run.sampler.temperature_i}};
      std::printf("cooling: eta = %.4f (A_i = %.4f l^2, A_B = %.4f l^2)\n",
                  rep.eta, rep.area_initial, rep.area_box);
    }
    std::printf("F = %.6f +- %.6f  (%lld/%lld caught, %lld anomalies)\n",
                est.fraction, est.std_error, (long long)est.n_caught,
                (long long)est.n_trials, (long long)est.n_anomalies);
  }

  meta["outputs"] = outputs;
  meta["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  write_json_file(output_path(cfg, cfg.output.metadata), meta);

  const double anomaly_rate =
      static_cast<double>(max_anomalies) / static_cast<double>(cfg.run.n_trials);
  if (anomaly_rate > 1e-3) {
    std::fprintf(stderr, "error: %.3f%% of trials were anomalous\n",
                 100.0 * anomaly_rate);
    return 3;
  }
  return 0;
}

}  // namespace boxsim
