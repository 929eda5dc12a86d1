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

#pragma once

// Flat key = value configuration files. Lines are `section.key = value`;
// `#` starts a comment; list values are comma separated. Unknown or repeated
// keys are rejected. See `config_keys()` for the schema and defaults.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qlbe/diffusion.hpp"
#include "qlbe/errors.hpp"
#include "qlbe/evolution.hpp"
#include "qlbe/generator.hpp"
#include "qlbe/kinematics.hpp"

namespace qlbe {

inline constexpr int kConfigSchemaVersion = 1;

enum class Scenario { constants, evolve, decohere, additivity, limits };

inline std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::constants: return "constants";
    case Scenario::evolve: return "evolve";
    case Scenario::decohere: return "decohere";
    case Scenario::additivity: return "additivity";
    case Scenario::limits: return "limits";
  }
  return "?";
}

inline Scenario parse_scenario(std::string_view name) {
  for (auto s : {Scenario::constants, Scenario::evolve, Scenario::decohere, Scenario::additivity,
                 Scenario::limits}) {
    if (scenario_name(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'", "scenario");
}

struct ConfigKey {
  const char* key;
  const char* default_value;
  const char* help;
};

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"masses.M", "10", "particle mass M"},
      {"masses.m", "1", "molecule mass m"},
      {"gas.beta", "1", "inverse temperature per gas component (list)"},
      {"gas.n", "1", "number density per gas component (list, same length as gas.beta)"},
      {"amplitude.model", "constant", "scattering amplitude: constant | gaussian"},
      {"amplitude.f0", "1", "amplitude scale f0"},
      {"amplitude.w", "1", "gaussian amplitude width in momentum"},
      {"amplitude.sigma", "1", "total cross section, used only to derive tau"},
      {"tau.value", "10", "intercollision time (ignored when tau.derive = true)"},
      {"tau.derive", "false", "derive tau = sqrt(pi beta m) / (sigma n) from the gas"},
      {"grid.N", "33", "momentum grid points"},
      {"grid.dP", "0.25", "momentum grid spacing"},
      {"generator.shifts", "-4,-2,-1,1,2,4", "momentum transfers in units of grid.dP (list)"},
      {"generator.k_order", "512", "Gauss-Hermite order of the gas momentum quadrature"},
      {"generator.coupling", "auto", "rate coupling replacing 2 pi / m*^2 (auto = that value)"},
      {"generator.hamiltonian", "false", "include -i[P^2/2M, rho]"},
      {"evolve.dt", "auto", "time step (auto = half the stability limit)"},
      {"evolve.steps", "400", "number of steps"},
      {"evolve.record_every", "4", "record stride in steps"},
      {"evolve.positivity_tol", "1e-8", "abort if the smallest eigenvalue drops below -tol"},
      {"evolve.edge_tol", "1e-6", "abort if the population on the grid edge exceeds tol"},
      {"evolve.edge_width", "1", "points per side counted as grid edge"},
      {"initial.state", "thermal", "eigenstate | superposition | thermal | mixed"},
      {"initial.p1", "-0.25", "first momentum (must be a grid point)"},
      {"initial.p2", "0.25", "second momentum (must be a grid point)"},
      {"initial.width", "0.5", "momentum spread of the thermal initial state"},
      {"decohere.taus", "10,20,40", "tau ladder of the decoherence scenario (list)"},
      {"quadrature.radial_order", "64", "Gauss-Legendre order for |Q|"},
      {"quadrature.perp_order", "8", "Gauss-Hermite order per perpendicular axis"},
      {"quadrature.tol", "1e-8", "relative convergence tolerance between orders p and p+4"},
      {"quadrature.inner_half_periods", "1000", "energy window of the delta_tau' integral"},
      {"quadrature.inner_nodes", "32000", "nodes across that window"},
      {"units.energy", "1", "report scale for energies"},
      {"units.time", "1", "report scale for times"},
      {"units.length", "1", "report scale for lengths"},
  };
  return keys;
}

enum class InitialKind { eigenstate, superposition, thermal, mixed };

struct InitialState {
  InitialKind kind = InitialKind::thermal;
  double p1 = -0.25;
  double p2 = 0.25;
  double width = 0.5;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::constants;
  GeneratorConfig generator;
  bool derive_tau = false;
  int N = 33;
  double dP = 0.25;
  EvolutionConfig evolution;
  bool auto_dt = true;
  InitialState initial;
  std::vector<double> tau_ladder;
  QuadratureOptions quadrature;
  UnitSystem units;
  std::filesystem::path out_dir = ".";
  /// Every schema key with its resolved value, in schema order.
  std::vector<std::pair<std::string, std::string>> resolved;

  MomentumGrid grid() const { return {N, dP}; }
};

/// Scientific notation with 17 significant digits.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + text + "'", key);
  }
  return v;
}

inline int to_int(const std::string& text, const std::string& key) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("expected an integer, got '" + text + "'", key);
  return v;
}

inline bool to_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("expected true or false, got '" + text + "'", key);
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T, class F>
std::vector<T> to_list(const std::string& text, const std::string& key, F convert) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(convert(item, key));
  if (out.empty()) throw ConfigError("empty list", key);
  return out;
}

template <class F>
void rethrow_as_config(const std::string& key, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), key);
  }
}

}  // namespace detail

/// Parses configuration text and validates every value against the
/// preconditions of the modules that will consume it.
inline ScenarioConfig parse_config_text(std::string_view text) {
  std::map<std::string, std::string> values;
  for (const auto& k : config_keys()) values[k.key] = k.default_value;
  std::map<std::string, bool> seen;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    if (!values.contains(key)) throw ConfigError("unknown key", key);
    if (seen[key]) throw ConfigError("key given twice", key);
    seen[key] = true;
    values[key] = value;
  }

  using detail::to_bool;
  using detail::to_double;
  using detail::to_int;
  ScenarioConfig cfg;
  auto num = [&](const char* k) { return to_double(values.at(k), k); };
  auto integer = [&](const char* k) { return to_int(values.at(k), k); };

  const double M = num("masses.M");
  const double m = num("masses.m");
  if (!(M > 0.0)) throw ConfigError("must be positive", "masses.M");
  if (!(m > 0.0)) throw ConfigError("must be positive", "masses.m");
  cfg.generator.masses = Masses(M, m);

  const auto betas = detail::to_list<double>(values.at("gas.beta"), "gas.beta", to_double);
  const auto densities = detail::to_list<double>(values.at("gas.n"), "gas.n", to_double);
  if (betas.size() != densities.size()) throw ConfigError("length differs from gas.beta", "gas.n");
  std::vector<GasComponent> comps;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) throw ConfigError("must be positive", "gas.beta");
    if (!(densities[i] >= 0.0)) throw ConfigError("must be non-negative", "gas.n");
    comps.push_back({m, betas[i], densities[i]});
  }
  cfg.generator.gas = GasMixture(std::move(comps));

  const std::string model = values.at("amplitude.model");
  const double f0 = num("amplitude.f0");
  if (model == "constant") {
    cfg.generator.amplitude.model = ConstantAmplitude{f0};
  } else if (model == "gaussian") {
    const double w = num("amplitude.w");
    if (!(w > 0.0)) throw ConfigError("must be positive", "amplitude.w");
    cfg.generator.amplitude.model = GaussianAmplitude{f0, w};
  } else {
    throw ConfigError("expected constant or gaussian", "amplitude.model");
  }
  cfg.generator.amplitude.sigma_total = num("amplitude.sigma");
  if (!(cfg.generator.amplitude.sigma_total > 0.0)) {
    throw ConfigError("must be positive", "amplitude.sigma");
  }

  cfg.derive_tau = to_bool(values.at("tau.derive"), "tau.derive");
  if (cfg.derive_tau) {
    for (double b : betas) {
      if (b != betas.front()) throw ConfigError("requires one common beta", "tau.derive");
    }
    detail::rethrow_as_config("tau.derive", [&] {
      cfg.generator.tau = intercollision_time(betas.front(), m, cfg.generator.amplitude.sigma_total,
                                              cfg.generator.gas.total_density());
    });
    values["tau.value"] = format_double(cfg.generator.tau);
  } else {
    cfg.generator.tau = num("tau.value");
    if (!(cfg.generator.tau > 0.0)) throw ConfigError("must be positive", "tau.value");
  }

  cfg.N = integer("grid.N");
  cfg.dP = num("grid.dP");
  detail::rethrow_as_config("grid.N", [&] { (void)cfg.grid(); });

  cfg.generator.shifts = detail::to_list<int>(values.at("generator.shifts"), "generator.shifts", to_int);
  cfg.generator.k_order = integer("generator.k_order");
  if (values.at("generator.coupling") != "auto") {
    cfg.generator.coupling = num("generator.coupling");
  }
  values["generator.coupling"] = format_double(cfg.generator.resolved_coupling());
  cfg.generator.include_hamiltonian = to_bool(values.at("generator.hamiltonian"), "generator.hamiltonian");
  cfg.generator.validate(cfg.grid());

  cfg.auto_dt = values.at("evolve.dt") == "auto";
  if (!cfg.auto_dt) cfg.evolution.dt = num("evolve.dt");
  cfg.evolution.n_steps = integer("evolve.steps");
  cfg.evolution.record_every = integer("evolve.record_every");
  cfg.evolution.positivity_tol = num("evolve.positivity_tol");
  cfg.evolution.edge_population_tol = num("evolve.edge_tol");
  cfg.evolution.edge_width = integer("evolve.edge_width");
  cfg.evolution.validate();

  const std::string kind = values.at("initial.state");
  if (kind == "eigenstate") {
    cfg.initial.kind = InitialKind::eigenstate;
  } else if (kind == "superposition") {
    cfg.initial.kind = InitialKind::superposition;
  } else if (kind == "thermal") {
    cfg.initial.kind = InitialKind::thermal;
  } else if (kind == "mixed") {
    cfg.initial.kind = InitialKind::mixed;
  } else {
    throw ConfigError("expected eigenstate, superposition, thermal or mixed", "initial.state");
  }
  cfg.initial.p1 = num("initial.p1");
  cfg.initial.p2 = num("initial.p2");
  cfg.initial.width = num("initial.width");
  if (!(cfg.initial.width > 0.0)) throw ConfigError("must be positive", "initial.width");

  cfg.tau_ladder = detail::to_list<double>(values.at("decohere.taus"), "decohere.taus", to_double);
  for (double t : cfg.tau_ladder) {
    if (!(t > 0.0)) throw ConfigError("must be positive", "decohere.taus");
  }

  cfg.quadrature.radial_order = integer("quadrature.radial_order");
  cfg.quadrature.perp_order = integer("quadrature.perp_order");
  cfg.quadrature.tol = num("quadrature.tol");
  cfg.quadrature.inner_half_periods = integer("quadrature.inner_half_periods");
  cfg.quadrature.inner_nodes = integer("quadrature.inner_nodes");
  if (cfg.quadrature.radial_order < 2) throw ConfigError("must be >= 2", "quadrature.radial_order");
  if (cfg.quadrature.perp_order < 1) throw ConfigError("must be >= 1", "quadrature.perp_order");
  if (!(cfg.quadrature.tol > 0.0)) throw ConfigError("must be positive", "quadrature.tol");
  if (cfg.quadrature.inner_half_periods < 1) {
    throw ConfigError("must be >= 1", "quadrature.inner_half_periods");
  }
  if (cfg.quadrature.inner_nodes < 8) throw ConfigError("must be >= 8", "quadrature.inner_nodes");

  cfg.units.energy = num("units.energy");
  cfg.units.time = num("units.time");
  cfg.units.length = num("units.length");
  for (const char* k : {"units.energy", "units.time", "units.length"}) {
    if (!(num(k) > 0.0)) throw ConfigError("must be positive", k);
  }

  for (const auto& k : config_keys()) cfg.resolved.emplace_back(k.key, values.at(k.key));
  return cfg;
}

/// Checks that depend on which scenario will run.
inline void validate_for_scenario(const ScenarioConfig& cfg) {
  const bool uses_initial = cfg.scenario == Scenario::evolve || cfg.scenario == Scenario::decohere;
  if (uses_initial) {
    const bool needs_p2 = cfg.scenario == Scenario::decohere ||
                          cfg.initial.kind == InitialKind::superposition ||
                          cfg.initial.kind == InitialKind::mixed;
    const bool needs_p1 = needs_p2 || cfg.initial.kind == InitialKind::eigenstate;
    if (needs_p1 && cfg.grid().index_of(cfg.initial.p1) < 0) {
      throw ConfigError("not a grid point", "initial.p1");
    }
    if (needs_p2 && cfg.grid().index_of(cfg.initial.p2) < 0) {
      throw ConfigError("not a grid point", "initial.p2");
    }
    if (needs_p2 && cfg.initial.p1 == cfg.initial.p2) {
      throw ConfigError("superposition needs two distinct momenta", "initial.p2");
    }
  }
  if (cfg.scenario == Scenario::additivity && cfg.generator.gas.components().size() != 2) {
    throw ConfigError("additivity needs exactly two gas components", "gas.beta");
  }
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'", "--config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace qlbe
