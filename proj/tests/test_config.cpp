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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlbe/config.hpp"
#include "qlbe/scenario.hpp"

namespace qlbe {
namespace {

namespace fs = std::filesystem;

std::string key_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

std::string resolved(const ScenarioConfig& cfg, const std::string& key) {
  for (const auto& [k, v] : cfg.resolved) {
    if (k == key) return v;
  }
  return "<missing>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qlbe_config_test" / name;
  fs::remove_all(dir);
  return dir;
}

TEST(Config, DefaultsResolveEveryKey) {
  const auto cfg = parse_config_text("");
  EXPECT_EQ(cfg.resolved.size(), config_keys().size());
  for (std::size_t i = 0; i < cfg.resolved.size(); ++i) {
    EXPECT_EQ(cfg.resolved[i].first, config_keys()[i].key);
  }
  EXPECT_EQ(cfg.N, 33);
  EXPECT_EQ(cfg.generator.tau, 10.0);
  EXPECT_EQ(cfg.generator.masses.particle(), 10.0);
  EXPECT_TRUE(cfg.auto_dt);
  // auto coupling is echoed as its value: 2 pi / m*^2 with m* = 10/11
  EXPECT_NEAR(std::stod(resolved(cfg, "generator.coupling")),
              2 * std::numbers::pi * 1.21, 1e-12);
}

TEST(Config, ErrorsNameTheOffendingKey) {
  EXPECT_EQ(key_of("gas.beta = -1"), "gas.beta");
  EXPECT_EQ(key_of("gas.beta = 1, 2"), "gas.n");
  EXPECT_EQ(key_of("grid.N = 3"), "grid.N");
  EXPECT_EQ(key_of("grid.N = many"), "grid.N");
  EXPECT_EQ(key_of("generator.shifts = 0, 1"), "generator.shifts");
  EXPECT_EQ(key_of("tau.value = 0"), "tau.value");
  EXPECT_EQ(key_of("evolve.steps = -2"), "evolve.steps");
  EXPECT_EQ(key_of("amplitude.model = yukawa"), "amplitude.model");
  EXPECT_EQ(key_of("initial.state = cat"), "initial.state");
  EXPECT_EQ(key_of("no.such.key = 1"), "no.such.key");
  EXPECT_EQ(key_of("grid.N = 20\ngrid.N = 21"), "grid.N");
  EXPECT_EQ(key_of("tau.derive = true\ngas.beta = 1, 2\ngas.n = 1, 1"), "tau.derive");
  EXPECT_EQ(key_of("grid.N = 16"), "<none>");
}

TEST(Config, CommentsAndWhitespace) {
  const auto cfg = parse_config_text("# header\n  grid.N =  20   # trailing\n\n");
  EXPECT_EQ(cfg.N, 20);
  EXPECT_THROW(parse_config_text("grid.N 20"), ConfigError);
}

TEST(Config, DerivedTauIsEchoed) {
  const auto cfg = parse_config_text(
      "tau.derive = true\ngas.beta = 2\ngas.n = 0.5\namplitude.sigma = 3\nmasses.m = 1.5");
  const double tau = std::sqrt(std::numbers::pi * 2.0 * 1.5) / (3.0 * 0.5);
  EXPECT_DOUBLE_EQ(cfg.generator.tau, tau);
  EXPECT_EQ(resolved(cfg, "tau.value"), format_double(tau));
}

TEST(Config, MissingFile) {
  try {
    parse_config("/nonexistent/qlbe.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "--config");
  }
}

TEST(Config, ScenarioNames) {
  for (auto s : {Scenario::constants, Scenario::evolve, Scenario::decohere, Scenario::additivity,
                 Scenario::limits}) {
    EXPECT_EQ(parse_scenario(scenario_name(s)), s);
  }
  EXPECT_THROW(parse_scenario("bogus"), ConfigError);
}

TEST(RunScenario, OffGridInitialMomentumIsConfigError) {
  auto cfg = parse_config_text("initial.state = superposition\ninitial.p1 = 0.1");
  cfg.scenario = Scenario::evolve;
  cfg.out_dir = scratch("offgrid");
  std::ostringstream out, err;
  EXPECT_EQ(run_scenario(cfg, out, err), kExitConfig);
  EXPECT_NE(err.str().find("initial.p1"), std::string::npos);
  // the same configuration is fine for a scenario that ignores it
  cfg.scenario = Scenario::limits;
  EXPECT_EQ(run_scenario(cfg, out, err), kExitOk);
}

TEST(RunScenario, EdgePopulationInvalidatesEvolve) {
  auto cfg = parse_config_text("grid.N = 8\ngrid.dP = 0.5\ngenerator.shifts = -1, 1\n"
                               "generator.k_order = 16\ninitial.state = thermal\ninitial.width = 2");
  cfg.scenario = Scenario::evolve;
  cfg.out_dir = scratch("edge");
  std::ostringstream out, err;
  EXPECT_EQ(run_scenario(cfg, out, err), kExitRunInvalidated);
  EXPECT_NE(err.str().find("edge population"), std::string::npos);
}

TEST(RunScenario, UnresolvedInnerIntegralIsAccuracyError) {
  auto cfg = parse_config_text("quadrature.inner_nodes = 800");
  cfg.scenario = Scenario::constants;
  cfg.out_dir = scratch("accuracy");
  std::ostringstream out, err;
  EXPECT_EQ(run_scenario(cfg, out, err), kExitAccuracy);
}

TEST(RunScenario, AdditivityNeedsTwoComponents) {
  auto cfg = parse_config_text("");
  cfg.scenario = Scenario::additivity;
  cfg.out_dir = scratch("additivity_one");
  std::ostringstream out, err;
  EXPECT_EQ(run_scenario(cfg, out, err), kExitConfig);
}

TEST(RunScenario, EmptyGasGivesZeroConstants) {
  auto cfg = parse_config_text("gas.n = 0");
  cfg.scenario = Scenario::constants;
  cfg.out_dir = scratch("empty");
  std::ostringstream out, err;
  ASSERT_EQ(run_scenario(cfg, out, err), kExitOk) << err.str();
  const auto rows = csv_rows(cfg.out_dir / "constants.csv");
  ASSERT_EQ(rows.size(), 2u);
  for (int col : {4, 5, 6, 7, 8}) EXPECT_EQ(std::stod(rows[1][col]), 0.0) << rows[0][col];
  EXPECT_EQ(rows[1][9], "1");
}

TEST(RunScenario, AdditivityArtifact) {
  auto cfg = parse_config_text("gas.beta = 1, 4\ngas.n = 1, 1\ngrid.N = 16\ngrid.dP = 0.5\n"
                               "generator.shifts = -2, -1, 1, 2\ngenerator.k_order = 32");
  cfg.scenario = Scenario::additivity;
  cfg.out_dir = scratch("additivity");
  std::ostringstream out, err;
  ASSERT_EQ(run_scenario(cfg, out, err), kExitOk) << err.str();
  const auto rows = csv_rows(cfg.out_dir / "additivity.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "linear");
  EXPECT_LE(std::stod(rows[1][1]), 1e-12);
  EXPECT_EQ(rows[2][0], "sqrt");
  EXPECT_GT(std::stod(rows[2][1]), 1e-3);
}

TEST(RunScenario, ArtifactHeaderRecordsResolvedConfig) {
  auto cfg = parse_config_text("gas.n = 0.5");
  cfg.scenario = Scenario::limits;
  cfg.out_dir = scratch("header");
  std::ostringstream out, err;
  ASSERT_EQ(run_scenario(cfg, out, err), kExitOk);
  const std::string text = slurp(cfg.out_dir / "limits.csv");
  EXPECT_EQ(text.rfind("# qlbe " + std::string(kVersion) + "\n", 0), 0u);
  EXPECT_NE(text.find("# scenario limits\n"), std::string::npos);
  EXPECT_NE(text.find("# gas.n = 0.5\n"), std::string::npos);
  EXPECT_NE(text.find("# generator.coupling = "), std::string::npos);
}

TEST(RunScenario, RerunsAreByteIdentical) {
  const std::string text =
      "grid.N = 17\ngrid.dP = 0.25\ngenerator.shifts = -1, 1\ngenerator.k_order = 64\n"
      "initial.state = superposition\ninitial.p1 = -0.25\ninitial.p2 = 0.25\n"
      "evolve.steps = 40\nevolve.edge_tol = 1\ndecohere.taus = 5, 10";
  for (auto s : {Scenario::evolve, Scenario::decohere}) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      auto cfg = parse_config_text(text);
      cfg.scenario = s;
      cfg.out_dir = scratch("rerun" + std::to_string(run));
      std::ostringstream out, err;
      ASSERT_EQ(run_scenario(cfg, out, err), kExitOk) << err.str();
      const std::string name = s == Scenario::evolve ? "evolve.csv" : "decohere.csv";
      const std::string bytes = slurp(cfg.out_dir / name);
      if (run == 0) {
        first = bytes;
      } else {
        EXPECT_EQ(bytes, first);
      }
    }
  }
}

TEST(SampleConfigs, AllParseAndValidate) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(QLBE_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    auto cfg = parse_config(entry.path());
    cfg.scenario = parse_scenario(entry.path().stem().string());
    EXPECT_NO_THROW(validate_for_scenario(cfg)) << entry.path();
    ++count;
  }
  EXPECT_EQ(count, 5);
}

TEST(Workers, ParallelForVisitsEverySlot) {
  std::vector<int> hits(37, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += static_cast<int>(i); });
  for (std::size_t i = 0; i < hits.size(); ++i) EXPECT_EQ(hits[i], static_cast<int>(i));
  EXPECT_THROW(parallel_for(3, 2, [](std::size_t i) {
                 if (i == 1) throw DomainError("boom");
               }),
               DomainError);
}

}  // namespace
}  // namespace qlbe
