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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance <path-to-qlbe-cli> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "qlbe/diffusion.hpp"
#include "qlbe/evolution.hpp"
#include "qlbe/generator.hpp"

namespace fs = std::filesystem;
using namespace qlbe;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
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

int run_cli(const std::string& cli, const std::string& scenario, const fs::path& config,
            const fs::path& out, const std::string& env = "") {
  const std::string cmd = env + " \"" + cli + "\" " + scenario + " --config \"" + config.string() +
                          "\" --out \"" + out.string() + "\" > \"" + (out.string() + ".log") +
                          "\" 2>&1";
  fs::create_directories(out.parent_path());
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

// Shared set-up of criteria 5 and 6: heavy particle, unit coupling, a
// 33-point grid fine enough that tau Q dP / 2M stays below pi on every rung.
GeneratorConfig ladder_config() {
  GeneratorConfig cfg;
  cfg.masses = Masses(10.0, 1.0);
  cfg.gas = GasMixture({GasComponent{1.0, 1.0, 1.0}});
  cfg.amplitude.model = ConstantAmplitude{1.0};
  cfg.k_order = 512;
  cfg.shifts = {-4, -2, -1, 1, 2, 4};
  cfg.coupling = 1.0;
  return cfg;
}

const std::vector<double> kLadder = {10.0, 20.0, 40.0};
const MomentumGrid kLadderGrid(33, 0.25);

Verdict criterion1() {
  bool ok = true;
  double worst_norm = 0.0, worst_sq = 0.0;
  for (double tau : {0.5, 1.0, 10.0}) {
    ok = ok && delta_tau(0.0, tau) == tau / (2.0 * kPi);
    const auto w = integrate_delta_tau(tau);
    worst_norm = std::max(worst_norm, std::abs(w.value - 1.0));
    ok = ok && w.tail_bound < 1e-6;
    const auto s = integrate_delta_tau_prime_squared(tau);
    const double exact = tau * tau * tau / (24.0 * kPi);
    worst_sq = std::max(worst_sq, std::abs(s.value - exact) / exact);
  }
  ok = ok && worst_norm <= 1e-6 && worst_sq <= 1e-6;
  return {ok, "peak exact; |int delta - 1| = " + sci(worst_norm) +
                  "; rel. error of int delta'^2 = " + sci(worst_sq)};
}

Verdict criterion2() {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> count(1, 12);
  double worst_trace = 0.0, worst_herm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto channels = oracle::random_channels(32, count(rng), rng);
    const Matrix rho = oracle::random_hermitian(32, rng);
    const Matrix out = apply_dissipator(channels, rho);
    worst_trace = std::max(worst_trace, std::abs(out.trace()));
    worst_herm = std::max(worst_herm, hermiticity_defect(out));
  }
  return {worst_trace <= 1e-12 && worst_herm <= 1e-12,
          "100 cases, max |tr| = " + sci(worst_trace) + ", max hermiticity defect = " +
              sci(worst_herm)};
}

Verdict criterion3() {
  auto cfg = ladder_config();
  cfg.tau = 10.0;
  cfg.k_order = 128;
  cfg.include_hamiltonian = true;
  const auto gen = make_generator(cfg, kLadderGrid);
  // Equal mixture of a coherent pair and a thermal diagonal.
  Eigen::VectorXd p(kLadderGrid.size());
  for (int i = 0; i < p.size(); ++i) p(i) = std::exp(-2.0 * std::pow(kLadderGrid.value(i), 2));
  p /= p.sum();
  const auto pair = DensityMatrix::superposition(kLadderGrid, kLadderGrid.index_of(-0.5),
                                                 kLadderGrid.index_of(0.5));
  const DensityMatrix rho0(kLadderGrid,
                           0.5 * (pair.elements + DensityMatrix::diagonal(kLadderGrid, p).elements));
  EvolutionConfig ec;
  ec.dt = 0.5 * kStabilityGuard / gen.spectral_bound();
  ec.n_steps = 1000;
  ec.record_every = 10;
  ec.edge_population_tol = 1.0;
  const auto res = evolve(rho0, ec, gen);
  double trace_err = 0.0, min_eig = 1.0;
  for (std::size_t i = 0; i < res.series.size(); ++i) {
    trace_err = std::max(trace_err, res.series.trace_error[i]);
    min_eig = std::min(min_eig, res.series.min_eigenvalue[i]);
  }
  return {trace_err <= 1e-8 && min_eig >= -1e-8,
          "1000 steps, max |tr - 1| = " + sci(trace_err) + ", min eigenvalue = " + sci(min_eig)};
}

Verdict criterion4() {
  GeneratorConfig cfg;
  cfg.masses = Masses(10.0, 1.0);
  cfg.gas = GasMixture({GasComponent{1.0, 1.0, 1.0}, GasComponent{1.0, 4.0, 1.0}});
  cfg.amplitude.model = ConstantAmplitude{1.0};
  cfg.tau = 10.0;
  cfg.k_order = 32;
  cfg.shifts = {-2, -1, 1, 2};
  const MomentumGrid grid(16, 0.5);
  const auto lin = additivity_defect(cfg, grid, KernelVariant::linear);
  const auto sq = additivity_defect(cfg, grid, KernelVariant::sqrt_kernel);
  return {lin.max_defect <= 1e-12 && sq.coherence_defect > 1e-3,
          "linear defect = " + sci(lin.max_defect) + ", sqrt coherence defect = " +
              sci(sq.coherence_defect)};
}

Verdict criterion5() {
  auto cfg = ladder_config();
  const auto& grid = kLadderGrid;
  const auto classical = classical_lbe_rates(grid, cfg);
  std::vector<Generator> gens;
  std::vector<double> bounds;
  for (double tau : kLadder) {
    cfg.tau = tau;
    gens.push_back(make_generator(cfg, grid));
    bounds.push_back(gens.back().spectral_bound());
  }
  const double dt = 0.5 * kStabilityGuard / *std::max_element(bounds.begin(), bounds.end());
  const int steps = static_cast<int>(std::ceil(40.0 / dt));

  Eigen::VectorXd p0(grid.size());
  for (int i = 0; i < p0.size(); ++i) p0(i) = std::exp(-0.5 * std::pow(grid.value(i) / 0.5, 2));
  p0 /= p0.sum();
  const auto reference = classical_evolve(p0, classical, dt, steps, 10);

  std::vector<double> deviation, gap;
  for (const auto& gen : gens) {
    EvolutionConfig ec;
    ec.dt = dt;
    ec.n_steps = steps;
    ec.record_every = 10;
    ec.edge_population_tol = 1.0;
    const auto q = evolve(DensityMatrix::diagonal(grid, p0), ec, gen);
    deviation.push_back(compare_diagonal(q.series, reference));
    // on-shell rates on the central half of the grid
    const auto quantum = population_rates(gen, cfg.shifts);
    double g = 0.0;
    for (int i = grid.size() / 4; i < 3 * grid.size() / 4; ++i) {
      for (std::size_t s = 0; s < cfg.shifts.size(); ++s) {
        const int target = i + cfg.shifts[s];
        if (target < 0 || target >= grid.size()) continue;
        g = std::max(g, std::abs(quantum.rates(i, s) / classical.rates(i, s) - 1.0));
      }
    }
    gap.push_back(g);
  }
  bool ok = true;
  for (std::size_t i = 1; i < kLadder.size(); ++i) {
    ok = ok && deviation[i] < deviation[i - 1] && gap[i] < gap[i - 1];
  }
  std::string detail = "tau {10,20,40}: diagonal deviation";
  for (double d : deviation) detail += " " + sci(d);
  detail += "; rate gap";
  for (double g : gap) detail += " " + sci(g);
  return {ok, detail};
}

Verdict criterion6(const std::string& cli, const fs::path& dir) {
  const fs::path config = dir / "decohere.cfg";
  std::ofstream(config) << "masses.M = 10\nmasses.m = 1\ngas.beta = 1\ngas.n = 1\n"
                           "generator.coupling = 1\ngrid.N = 33\ngrid.dP = 0.25\n"
                           "generator.shifts = -4, -2, -1, 1, 2, 4\ngenerator.k_order = 512\n"
                           "initial.p1 = -0.25\ninitial.p2 = 0.25\n"
                           "decohere.taus = 10, 20, 40\nevolve.steps = 400\n"
                           "evolve.record_every = 4\nevolve.edge_tol = 1\n";
  const int code = run_cli(cli, "decohere", config, dir / "decohere");
  if (code != 0) return {false, "cli exited with " + std::to_string(code)};
  const auto rows = csv_rows(dir / "decohere" / "decohere_rates.csv");
  if (rows.size() != kLadder.size() + 1) return {false, "unexpected decohere_rates.csv layout"};
  bool ok = true;
  std::string detail = "fitted rates";
  double previous = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rate = std::stod(rows[i][1]);
    ok = ok && rate >= previous && rate > 0.0;
    previous = rate;
    detail += " " + sci(rate);
  }
  return {ok, detail + " along tau {10,20,40}"};
}

Verdict criterion7() {
  const Masses ms(100.0, 1.0);
  const GasComponent gas{1.0, 1.0, 1.0};
  ScatteringAmplitude f;
  f.model = ConstantAmplitude{1.0};
  const double dpp = dpp_quadrature(gas, f, ms).D_pp;
  const double closed = oracle::dpp_constant_amplitude(1.0, 1.0, 1.0, 1.0);
  const double dpp_err = std::abs(dpp / closed - 1.0);
  const double tau = 5.0;
  const double route = dxx_coefficient_quadrature(gas, f, ms, tau);
  const double dxx_err = std::abs(route / dxx_from_tau(dpp, tau, ms) - 1.0);
  return {dpp_err <= 1e-4 && dxx_err <= 1e-2,
          "D_pp rel. error = " + sci(dpp_err) + ", D_xx route vs tau^2 D_pp / 3M^2 = " +
              sci(dxx_err)};
}

Verdict criterion8() {
  const Masses ms(100.0, 1.0);
  ScatteringAmplitude f;
  f.model = ConstantAmplitude{1.0};
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) {
    const GasComponent gas{1.0, beta, 1.0};
    auto verdict = [&](double tau) { return diffusion_constants(gas, f, ms, tau).cp_satisfied; };
    double lo = 1e-3, hi = 10.0;
    if (verdict(lo) || !verdict(hi)) return {false, "no sign change in the bracket"};
    while ((hi - lo) / hi > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      (verdict(mid) ? hi : lo) = mid;
    }
    worst = std::max(worst, std::abs(hi / (std::sqrt(3.0) * beta / 4.0) - 1.0));
  }
  return {worst <= 1e-10, "flip at sqrt(3) beta / 4, max rel. error = " + sci(worst)};
}

Verdict criterion9() {
  // Two momenta on a 6-point grid; amplitude damping |P_3> -> |P_2> at rate g.
  // Analytic: rho_33 = p e^{-g t}, rho_23 = c e^{-g t / 2}.
  const MomentumGrid grid(6, 1.0);
  const double g = 0.8;
  LindbladChannel ch;
  ch.shift = -1;
  ch.weight = g;
  ch.factor = Eigen::VectorXcd::Zero(6);
  ch.factor(3) = 1.0;
  const Generator gen(grid, {ch});
  Matrix r = Matrix::Zero(6, 6);
  r(2, 2) = 0.4;
  r(3, 3) = 0.6;
  r(2, 3) = Complex(0.3, 0.2);
  r(3, 2) = std::conj(r(2, 3));
  EvolutionConfig ec;
  ec.dt = 0.01;
  ec.n_steps = static_cast<int>(std::ceil(2.0 / g / ec.dt));  // one e-fold of the coherence
  ec.edge_population_tol = 1.0;
  const auto res = evolve(DensityMatrix(grid, r), ec, gen);
  double worst = 0.0;
  for (std::size_t n = 0; n < res.series.size(); ++n) {
    const double t = res.series.times[n];
    const double expected = 2.0 * std::abs(r(2, 3)) * std::exp(-0.5 * g * t);
    worst = std::max(worst, std::abs(res.series.coherence_l1[n] - expected));
  }
  const double t = ec.n_steps * ec.dt;
  const auto& fin = res.final_state.elements;
  worst = std::max(worst, std::abs(fin(3, 3).real() - 0.6 * std::exp(-g * t)));
  return {worst <= 1e-6, "max deviation from the analytic 2x2 solution = " + sci(worst)};
}

Verdict criterion10(const std::string& cli, const fs::path& dir) {
  const fs::path config = dir / "determinism.cfg";
  std::ofstream(config) << "grid.N = 33\ngrid.dP = 0.25\ngenerator.k_order = 256\n"
                           "initial.state = mixed\ninitial.p1 = -0.5\ninitial.p2 = 0.5\n"
                           "evolve.steps = 200\nevolve.edge_tol = 1\ndecohere.taus = 5, 10, 20\n"
                           "generator.hamiltonian = true\n";
  std::size_t compared = 0;
  for (const std::string scenario : {"constants", "evolve", "decohere", "limits"}) {
    const fs::path a = dir / "determinism" / (scenario + "_a");
    const fs::path b = dir / "determinism" / (scenario + "_b");
    if (run_cli(cli, scenario, config, a, "QLBE_WORKERS=1") != 0 ||
        run_cli(cli, scenario, config, b, "QLBE_WORKERS=3") != 0) {
      return {false, scenario + " run failed"};
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto other = b / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        return {false, entry.path().filename().string() + " differs between runs"};
      }
      ++compared;
    }
  }
  return {compared >= 5, std::to_string(compared) + " artifacts byte-identical across reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <qlbe-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path dir = argv[2];
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"delta_tau identities", criterion1},
      {"dissipator trace and hermiticity", criterion2},
      {"evolution integrity", criterion3},
      {"gas additivity", criterion4},
      {"classical recovery along the tau ladder", criterion5},
      {"decoherence grows with tau", [&] { return criterion6(cli, dir); }},
      {"diffusion limit", criterion7},
      {"complete-positivity boundary", criterion8},
      {"two-momentum toy", criterion9},
      {"determinism", [&] { return criterion10(cli, dir); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
