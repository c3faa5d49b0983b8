#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "boxsim/config.hpp"
#include "boxsim/presets.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"boxsim - Monte Carlo capture of atoms by a moving diodic box "
               "in 2D wedge and harmonic traps"};
  app.set_version_flag("--version", std::string("boxsim ") + boxsim::kToolVersion);
  app.require_subcommand(1);

  const char* env_out = std::getenv("BOXSIM_OUT");
  const std::string default_out = env_out ? env_out : ".";

  // run <config>
  std::string config_path;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "run a scenario config file");
  run_cmd->add_option("config", config_path, "JSON scenario config")->required();
  run_cmd->add_option("--out", run_out, "output directory override");

  // preset <name>
  std::string preset_name;
  boxsim::PresetOptions popts;
  popts.out_dir = default_out;
  auto* preset_cmd = app.add_subcommand("preset", "run a built-in scenario");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_option("--trials", popts.n_trials, "trials per grid point");
  preset_cmd->add_option("--seed", popts.master_seed, "master seed");
  preset_cmd->add_option("--out", popts.out_dir, "output directory");
  preset_cmd->add_option("--threads", popts.threads, "worker threads (0 = auto)");

  auto* list_cmd = app.add_subcommand("list-presets", "list built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    if (i) command_line += ' ';
    command_line += argv[i];
  }

  try {
    if (run_cmd->parsed()) {
      boxsim::ScenarioConfig cfg = boxsim::load_config(config_path);
      if (!run_out.empty())
        cfg.output.dir = run_out;
      else if (cfg.output.dir == "." && env_out)
        cfg.output.dir = default_out;
      return boxsim::run_scenario(cfg, command_line);
    }
    if (preset_cmd->parsed()) return boxsim::run_preset(preset_name, popts);
    if (list_cmd->parsed()) {
      std::printf("%-28s %8s  %s\n", "name", "trials", "description");
      for (const auto& p : boxsim::presets())
        std::printf("%-28s %8lld  %s\n", p.name.c_str(),
                    (long long)p.default_trials, p.description.c_str());
      return 0;
    }
  } catch (const nlohmann::json::parse_error& e) {
    std::fprintf(stderr, "config parse error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
