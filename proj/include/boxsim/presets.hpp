#pragma once
#include <functional>
#include <string>
#include <vector>

#include "boxsim/config.hpp"

namespace boxsim {

struct PresetOptions {
  std::int64_t n_trials = 0;  // 0 = preset default
  std::uint64_t master_seed = 0xC0FFEE;
  std::string out_dir = ".";
  int threads = 0;
};

struct Preset {
  std::string name;
  std::string description;
  std::int64_t default_trials = 100000;
  std::function<int(const Preset&, const PresetOptions&)> run;
};

// All registered presets. Every base preset has a "<name>-paper" twin that
// defaults to 10^6 trials.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);
int run_preset(const std::string& name, const PresetOptions& opts);

}  // namespace boxsim
