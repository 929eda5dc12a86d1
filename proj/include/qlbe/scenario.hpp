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

// Scenario orchestration behind the `qlbe` command line tool. Every artifact
// starts with a `#` header echoing the library version and the fully
// resolved configuration; numbers are written with 17 significant digits so
// identical configurations give byte-identical files.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qlbe/config.hpp"
#include "qlbe/diffusion.hpp"
#include "qlbe/evolution.hpp"
#include "qlbe/generator.hpp"

namespace qlbe {

inline constexpr const char* kWorkersEnv = "QLBE_WORKERS";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitRunInvalidated = 3,
  kExitAccuracy = 4,
};

/// Worker count from QLBE_WORKERS, defaulting to the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `task(i)` for i in [0, n) on up to `workers` threads. Each task writes
/// only its own slot, so the result does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& task) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline DensityMatrix initial_state(const ScenarioConfig& cfg) {
  const auto grid = cfg.grid();
  const int i1 = grid.index_of(cfg.initial.p1);
  const int i2 = grid.index_of(cfg.initial.p2);
  auto thermal = [&] {
    Eigen::VectorXd p(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      const double P = grid.value(i) / cfg.initial.width;
      p(i) = std::exp(-0.5 * P * P);
    }
    return DensityMatrix::diagonal(grid, p / p.sum());
  };
  switch (cfg.initial.kind) {
    case InitialKind::eigenstate: return DensityMatrix::superposition(grid, i1, i1);
    case InitialKind::superposition: return DensityMatrix::superposition(grid, i1, i2);
    case InitialKind::thermal: return thermal();
    case InitialKind::mixed: {
      const auto a = DensityMatrix::superposition(grid, i1, i2);
      const auto b = thermal();
      return {grid, 0.5 * (a.elements + b.elements)};
    }
  }
  return thermal();
}

/// Step size: the configured one, or half the stability limit of the
/// stiffest generator in `bounds`.
inline double resolve_dt(const ScenarioConfig& cfg, const std::vector<double>& bounds) {
  if (!cfg.auto_dt) return cfg.evolution.dt;
  const double worst = *std::max_element(bounds.begin(), bounds.end());
  return worst > 0.0 ? 0.5 * kStabilityGuard / worst : 1.0;
}

namespace detail {

class Artifact {
 public:
  Artifact(const ScenarioConfig& cfg, const std::string& name,
           const std::vector<std::pair<std::string, std::string>>& extra)
      : path_(cfg.out_dir / name), out_(path_, std::ios::binary) {
    if (!out_) throw ConfigError("cannot write '" + path_.string() + "'", "--out");
    out_ << "# qlbe " << kVersion << "\n";
    out_ << "# config-schema " << kConfigSchemaVersion << "\n";
    out_ << "# scenario " << scenario_name(cfg.scenario) << "\n";
    for (const auto& [k, v] : cfg.resolved) out_ << "# " << k << " = " << v << "\n";
    for (const auto& [k, v] : extra) out_ << "# resolved " << k << " = " << v << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

inline std::string fmt(double v) { return format_double(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string fmt(bool v) { return v ? "1" : "0"; }

inline void run_constants(const ScenarioConfig& cfg, std::ostream& out) {
  const auto& g = cfg.generator;
  Artifact csv(cfg, "constants.csv", {});
  csv.row({"component", "beta", "n_g", "tau", "eta", "D_pp", "D_xx", "D_xx_route", "cp_margin",
           "cp_satisfied"});
  const auto& comps = g.gas.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto consts = diffusion_constants(comps[c], g.amplitude, g.masses, g.tau, cfg.quadrature);
    const double route =
        dxx_coefficient_quadrature(comps[c], g.amplitude, g.masses, g.tau, cfg.quadrature);
    csv.row({fmt(c), fmt(comps[c].beta), fmt(comps[c].n_g), fmt(g.tau), fmt(consts.eta),
             fmt(consts.D_pp), fmt(consts.D_xx), fmt(route), fmt(consts.cp_margin),
             fmt(consts.cp_satisfied)});
    out << "component " << c << ": eta = " << consts.eta << ", D_pp = " << consts.D_pp
        << ", D_xx = " << consts.D_xx << " (derivation route " << route << "), CP "
        << (consts.cp_satisfied ? "satisfied" : "violated") << "\n";
  }
  out << "wrote " << csv.path().string() << "\n";
}

inline void run_evolve(const ScenarioConfig& cfg, std::ostream& out) {
  const auto grid = cfg.grid();
  const auto gen = make_generator(cfg.generator, grid);
  EvolutionConfig ec = cfg.evolution;
  ec.dt = resolve_dt(cfg, {gen.spectral_bound()});
  const auto result = evolve(initial_state(cfg), ec, gen);
  const auto& s = result.series;
  Artifact csv(cfg, "evolve.csv", {{"evolve.dt", fmt(ec.dt)}});
  csv.row({"time", "trace_error", "coherence_l1", "mean_P", "var_P", "min_eig", "edge_pop"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv.row({fmt(s.times[i]), fmt(s.trace_error[i]), fmt(s.coherence_l1[i]), fmt(s.mean_P[i]),
             fmt(s.var_P[i]), fmt(s.min_eigenvalue[i]), fmt(s.edge_population[i])});
  }
  out << "evolved " << ec.n_steps << " steps of dt = " << ec.dt << ": coherence_l1 "
      << s.coherence_l1.front() << " -> " << s.coherence_l1.back() << ", var_P "
      << s.var_P.front() << " -> " << s.var_P.back() << "\n";
  out << "wrote " << csv.path().string() << "\n";
}

inline void run_decohere(const ScenarioConfig& cfg, std::ostream& out) {
  const auto grid = cfg.grid();
  const auto& taus = cfg.tau_ladder;
  std::vector<Generator> gens;
  std::vector<double> bounds;
  for (double tau : taus) {
    GeneratorConfig g = cfg.generator;
    g.tau = tau;
    gens.push_back(make_generator(g, grid));
    bounds.push_back(gens.back().spectral_bound());
  }
  EvolutionConfig ec = cfg.evolution;
  ec.dt = resolve_dt(cfg, bounds);
  const auto rho0 = DensityMatrix::superposition(grid, grid.index_of(cfg.initial.p1),
                                                 grid.index_of(cfg.initial.p2));
  std::vector<ObservableSeries> series(taus.size());
  std::vector<double> rates(taus.size());
  parallel_for(taus.size(), worker_count(), [&](std::size_t i) {
    series[i] = evolve(rho0, ec, gens[i]).series;
    rates[i] = fit_decay_rate(series[i].times, series[i].coherence_l1);
  });

  Artifact csv(cfg, "decohere.csv", {{"evolve.dt", fmt(ec.dt)}});
  csv.row({"tau", "time", "coherence_l1"});
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t n = 0; n < series[i].size(); ++n) {
      csv.row({fmt(taus[i]), fmt(series[i].times[n]), fmt(series[i].coherence_l1[n])});
    }
  }
  Artifact fit(cfg, "decohere_rates.csv", {{"evolve.dt", fmt(ec.dt)}});
  fit.row({"tau", "rate"});
  for (std::size_t i = 0; i < taus.size(); ++i) {
    fit.row({fmt(taus[i]), fmt(rates[i])});
    out << "tau = " << taus[i] << ": coherence decay rate " << rates[i] << "\n";
  }
  out << "wrote " << csv.path().string() << " and " << fit.path().string() << "\n";
}

inline void run_additivity(const ScenarioConfig& cfg, std::ostream& out) {
  const auto grid = cfg.grid();
  Artifact csv(cfg, "additivity.csv", {});
  csv.row({"variant", "max_defect", "coherence_defect", "population_defect"});
  for (auto [variant, name] : {std::pair{KernelVariant::linear, "linear"},
                               std::pair{KernelVariant::sqrt_kernel, "sqrt"}}) {
    const auto d = additivity_defect(cfg.generator, grid, variant);
    csv.row({name, fmt(d.max_defect), fmt(d.coherence_defect), fmt(d.population_defect)});
    out << name << " generator: additivity defect " << d.max_defect << " (coherences "
        << d.coherence_defect << ", populations " << d.population_defect << ")\n";
  }
  out << "wrote " << csv.path().string() << "\n";
}

inline void run_limits(const ScenarioConfig& cfg, std::ostream& out) {
  const auto& g = cfg.generator;
  Artifact csv(cfg, "limits.csv", {});
  csv.row({"component", "beta", "n_g", "tau", "tau_kT", "threshold", "satisfied", "density_ratio",
           "tau_reported"});
  const auto& comps = g.gas.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    TauConstraintReport r;
    rethrow_as_config("gas.n", [&] { r = tau_constraint_report(comps[c], g.amplitude.sigma_total); });
    csv.row({fmt(c), fmt(comps[c].beta), fmt(comps[c].n_g), fmt(r.tau), fmt(r.tau_kT),
             fmt(r.threshold), fmt(r.satisfied), fmt(r.density_ratio),
             fmt(r.tau * cfg.units.time)});
    out << "component " << c << ": tau = " << r.tau << ", tau k_B T = " << r.tau_kT
        << " vs sqrt(3)/4 = " << r.threshold << " -> " << (r.satisfied ? "ok" : "violated")
        << "; sqrt(m k_B T)/(sigma n_g) = " << r.density_ratio << "\n";
  }
  out << "wrote " << csv.path().string() << "\n";
}

}  // namespace detail

/// Runs the configured scenario, writing artifacts under `cfg.out_dir` and a
/// human-readable summary to `out`. Returns the process exit code.
inline int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate_for_scenario(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    out << "qlbe " << kVersion << " scenario " << scenario_name(cfg.scenario)
        << ", tau = " << cfg.generator.tau << (cfg.derive_tau ? " (derived)" : "") << "\n";
    switch (cfg.scenario) {
      case Scenario::constants: detail::run_constants(cfg, out); break;
      case Scenario::evolve: detail::run_evolve(cfg, out); break;
      case Scenario::decohere: detail::run_decohere(cfg, out); break;
      case Scenario::additivity: detail::run_additivity(cfg, out); break;
      case Scenario::limits: detail::run_limits(cfg, out); break;
    }
    return kExitOk;
  } catch (const RunInvalidated& e) {
    err << "run invalidated: " << e.what() << "\n";
    return kExitRunInvalidated;
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace qlbe
