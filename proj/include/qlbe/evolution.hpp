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

// Fixed-step time evolution of the particle state, the classical population
// master equation it reduces to, and the diagnostics comparing the two.

#include <cmath>
#include <concepts>
#include <functional>
#include <numbers>
#include <vector>

#include "qlbe/errors.hpp"
#include "qlbe/generator.hpp"
#include "qlbe/grid.hpp"

namespace qlbe {

/// dt times the generator's spectral bound may not exceed this.
inline constexpr double kStabilityGuard = 0.1;

template <class G>
concept GeneratorLike = requires(const G& g, const Matrix& m) {
  { g.apply(m) } -> std::convertible_to<Matrix>;
  { g.spectral_bound() } -> std::convertible_to<double>;
};

/// Wraps an arbitrary linear map with a caller-supplied spectral bound.
struct FunctionGenerator {
  std::function<Matrix(const Matrix&)> map;
  double bound = 0.0;

  Matrix apply(const Matrix& rho) const { return map(rho); }
  double spectral_bound() const { return bound; }
};

struct EvolutionConfig {
  double dt = 1e-3;
  int n_steps = 1000;
  double positivity_tol = 1e-8;
  double edge_population_tol = 1e-6;
  int edge_width = 1;
  int record_every = 1;

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive", "evolve.dt");
    if (n_steps < 0) throw ConfigError("n_steps must be >= 0", "evolve.steps");
    if (record_every < 1) throw ConfigError("record_every must be >= 1", "evolve.record_every");
    if (edge_width < 1) throw ConfigError("edge_width must be >= 1", "evolve.edge_width");
  }
};

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> trace_error;
  std::vector<double> coherence_l1;
  std::vector<double> mean_P;
  std::vector<double> var_P;
  std::vector<double> min_eigenvalue;
  std::vector<double> edge_population;
  std::vector<Eigen::VectorXd> diagonals;

  std::size_t size() const { return times.size(); }
};

struct EvolutionResult {
  ObservableSeries series;
  DensityMatrix final_state;
};

template <GeneratorLike G>
void check_stability(const G& gen, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive", "evolve.dt");
  const double bound = gen.spectral_bound();
  if (dt * bound > kStabilityGuard) {
    throw ConfigError("dt * spectral bound = " + std::to_string(dt * bound) + " exceeds " +
                          std::to_string(kStabilityGuard),
                      "evolve.dt");
  }
}

/// One classical fourth-order Runge–Kutta step, re-hermitized.
template <GeneratorLike G>
DensityMatrix step(const DensityMatrix& rho, const G& gen, double dt) {
  check_stability(gen, dt);
  const Matrix& r = rho.elements;
  const Matrix k1 = gen.apply(r);
  const Matrix k2 = gen.apply(r + 0.5 * dt * k1);
  const Matrix k3 = gen.apply(r + 0.5 * dt * k2);
  const Matrix k4 = gen.apply(r + dt * k3);
  Matrix next = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  hermitize(next);
  return {rho.grid, std::move(next)};
}

namespace detail {

inline void record(ObservableSeries& s, const DensityMatrix& rho, double t, int edge_width) {
  s.times.push_back(t);
  s.trace_error.push_back(std::abs(trace(rho.elements) - 1.0));
  s.coherence_l1.push_back(coherence_l1(rho.elements));
  s.mean_P.push_back(mean_momentum(rho));
  s.var_P.push_back(momentum_variance(rho));
  s.min_eigenvalue.push_back(min_eigenvalue(rho.elements));
  s.edge_population.push_back(edge_population(rho.elements, edge_width));
  s.diagonals.push_back(populations(rho.elements));
}

inline void monitor(const ObservableSeries& s, const EvolutionConfig& cfg) {
  const double t = s.times.back();
  if (s.min_eigenvalue.back() < -cfg.positivity_tol) {
    throw RunInvalidated("minimum eigenvalue " + std::to_string(s.min_eigenvalue.back()) +
                             " below -positivity_tol",
                         t);
  }
  if (s.edge_population.back() > cfg.edge_population_tol) {
    throw RunInvalidated("edge population " + std::to_string(s.edge_population.back()) +
                             " above edge_population_tol",
                         t);
  }
}

}  // namespace detail

/// Steps rho0 `n_steps` times, recording observables at step 0 and every
/// `record_every` steps. Positivity and edge population are checked at each
/// record; a violation throws RunInvalidated carrying the time.
template <GeneratorLike G>
EvolutionResult evolve(const DensityMatrix& rho0, const EvolutionConfig& cfg, const G& gen) {
  cfg.validate();
  check_stability(gen, cfg.dt);
  EvolutionResult out{{}, rho0};
  detail::record(out.series, rho0, 0.0, cfg.edge_width);
  detail::monitor(out.series, cfg);
  for (int n = 1; n <= cfg.n_steps; ++n) {
    out.final_state = step(out.final_state, gen, cfg.dt);
    if (n % cfg.record_every == 0) {
      detail::record(out.series, out.final_state, n * cfg.dt, cfg.edge_width);
      detail::monitor(out.series, cfg);
    }
  }
  return out;
}

/// Decay rate of a positive series from a least-squares line through
/// log(values) over the first e-fold (at least the first two samples).
inline double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw ContractViolation("fit_decay_rate: need two or more matching samples");
  }
  if (!(values.front() > 0.0)) throw DomainError("fit_decay_rate: initial value must be positive");
  const double floor = values.front() / std::numbers::e;
  std::size_t n = 1;
  while (n < values.size() && values[n] > 0.0 && values[n] >= floor) ++n;
  n = std::max<std::size_t>(n, 2);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = std::log(values[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sty - st * sy) / (dn * stt - st * st);
  return -slope;
}

/// Transition rates R(P_i -> P_i + shift dP), one column per shift.
struct RateTable {
  MomentumGrid grid;
  std::vector<int> shifts;
  Eigen::MatrixXd rates;
};

/// On-shell classical rates
///   R(P -> P + Q) = coupling dQ / (2 pi) sum_c n_c rho_c(k_root) |f|^2 m / |Q|,
/// k_root = (M*/2M) Q + (m/M) P. This is the linear generator's population
/// rate with delta_tau^2 replaced by (tau / 2 pi) delta.
inline RateTable classical_lbe_rates(const MomentumGrid& grid, const GeneratorConfig& cfg) {
  for (int s : cfg.shifts) {
    if (s == 0) throw DomainError("classical_lbe_rates: zero transfer has no on-shell density");
  }
  cfg.validate(grid);
  const double m = cfg.masses.molecule();
  const double prefactor = cfg.resolved_coupling() * grid.spacing() / (2.0 * std::numbers::pi);
  RateTable table{grid, cfg.shifts, Eigen::MatrixXd::Zero(grid.size(), cfg.shifts.size())};
  for (std::size_t c = 0; c < cfg.shifts.size(); ++c) {
    const double Q = cfg.shifts[c] * grid.spacing();
    const double f2 = std::norm(amplitude_eval_1d(cfg.amplitude, -0.5 * Q, 0.5 * Q));
    for (int i = 0; i < grid.size(); ++i) {
      const double k_root = on_shell_gas_momentum_1d(grid.value(i), Q, cfg.masses);
      double density = 0.0;
      for (const auto& comp : cfg.gas.components()) density += comp.n_g * mb_density_1d(k_root, comp);
      table.rates(i, static_cast<Eigen::Index>(c)) = prefactor * density * f2 * m / std::abs(Q);
    }
  }
  return table;
}

/// Population rates of a quantum generator, laid out like classical_lbe_rates.
inline RateTable population_rates(const Generator& gen, const std::vector<int>& shifts) {
  const auto& grid = gen.grid();
  RateTable table{grid, shifts, Eigen::MatrixXd::Zero(grid.size(), shifts.size())};
  for (std::size_t c = 0; c < shifts.size(); ++c) {
    for (int i = 0; i < grid.size(); ++i) {
      table.rates(i, static_cast<Eigen::Index>(c)) = gen.population_rate(i, shifts[c]);
    }
  }
  return table;
}

struct ClassicalSeries {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> distributions;
};

namespace detail {

inline Eigen::VectorXd master_rhs(const RateTable& table, const Eigen::VectorXd& p) {
  const int N = table.grid.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
  for (std::size_t c = 0; c < table.shifts.size(); ++c) {
    const int s = table.shifts[c];
    for (int i = 0; i < N; ++i) {
      const int j = i + s;
      if (j < 0 || j >= N) continue;
      const double flow = table.rates(i, static_cast<Eigen::Index>(c)) * p(i);
      out(j) += flow;
      out(i) -= flow;
    }
  }
  return out;
}

}  // namespace detail

/// Gain-loss master equation for populations, RK4 with the same step
/// convention as `evolve`. Transitions leaving the grid are dropped.
inline ClassicalSeries classical_evolve(const Eigen::VectorXd& p0, const RateTable& rates,
                                        double dt, int n_steps, int record_every = 1) {
  if (p0.size() != rates.grid.size()) {
    throw ContractViolation("classical_evolve: distribution does not match the rate grid");
  }
  if ((p0.array() < 0.0).any()) throw DomainError("classical_evolve: negative probability");
  if (std::abs(p0.sum() - 1.0) > 1e-10) throw DomainError("classical_evolve: p0 must sum to 1");
  if (!(dt > 0.0) || n_steps < 0 || record_every < 1) {
    throw DomainError("classical_evolve: invalid step parameters");
  }
  ClassicalSeries out;
  Eigen::VectorXd p = p0;
  out.times.push_back(0.0);
  out.distributions.push_back(p);
  for (int n = 1; n <= n_steps; ++n) {
    const Eigen::VectorXd k1 = detail::master_rhs(rates, p);
    const Eigen::VectorXd k2 = detail::master_rhs(rates, p + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = detail::master_rhs(rates, p + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = detail::master_rhs(rates, p + dt * k3);
    p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (n % record_every == 0) {
      out.times.push_back(n * dt);
      out.distributions.push_back(p);
    }
  }
  return out;
}

/// max_t max_i |rho_ii(t) - p_i(t)| over matching records.
inline double compare_diagonal(const ObservableSeries& quantum, const ClassicalSeries& classical) {
  if (quantum.diagonals.size() != classical.distributions.size()) {
    throw ContractViolation("compare_diagonal: series have different record counts");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < quantum.diagonals.size(); ++n) {
    if (std::abs(quantum.times[n] - classical.times[n]) > 1e-12 * (1.0 + quantum.times[n])) {
      throw ContractViolation("compare_diagonal: series timelines differ");
    }
    if (quantum.diagonals[n].size() != classical.distributions[n].size()) {
      throw ContractViolation("compare_diagonal: series grids differ");
    }
    worst = std::max(worst, (quantum.diagonals[n] - classical.distributions[n]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qlbe
