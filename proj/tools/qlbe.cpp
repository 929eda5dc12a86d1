// Copyright 2026 The QLBE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qlbe <scenario> --config <path> [--out <dir>]

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "qlbe/config.hpp"
#include "qlbe/scenario.hpp"

namespace {

std::string help_footer() {
  std::ostringstream os;
  os << "\nScenarios:\n"
        "  constants   diffusion-limit constants per gas component -> constants.csv\n"
        "  evolve      time evolution of the configured initial state -> evolve.csv\n"
        "  decohere    coherence decay along decohere.taus -> decohere.csv, decohere_rates.csv\n"
        "  additivity  two-component additivity defects, linear vs sqrt kernel -> additivity.csv\n"
        "  limits      intercollision-time consistency report -> limits.csv\n"
        "\nConfig keys (schema "
     << qlbe::kConfigSchemaVersion << "; `key = value`, `#` comments, lists comma separated):\n";
  for (const auto& k : qlbe::config_keys()) {
    std::string key = k.key;
    key.resize(std::max<std::size_t>(key.size(), 30), ' ');
    os << "  " << key << " [" << k.default_value << "] " << k.help << "\n";
  }
  os << "\nEnvironment:\n  " << qlbe::kWorkersEnv
     << "  worker threads for tau ladders (default: hardware concurrency)\n"
        "\nExit codes: 0 success, 2 configuration error, 3 run invalidated, 4 accuracy failure\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-intercollision-time quantum linear Boltzmann equation toolkit"};
  app.set_version_flag("--version", std::string("qlbe ") + qlbe::kVersion);
  app.footer(help_footer());

  std::string scenario;
  std::string config_path;
  std::string out_dir = ".";
  app.add_option("scenario", scenario, "constants | evolve | decohere | additivity | limits")
      ->required();
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qlbe::kExitConfig;
  }

  qlbe::ScenarioConfig cfg;
  try {
    cfg = qlbe::parse_config(config_path);
    cfg.scenario = qlbe::parse_scenario(scenario);
  } catch (const qlbe::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return qlbe::kExitConfig;
  }
  cfg.out_dir = out_dir;
  return qlbe::run_scenario(cfg, std::cout, std::cerr);
}
