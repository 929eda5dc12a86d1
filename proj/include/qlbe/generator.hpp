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

// Lindblad generator of the finite-intercollision-time linear Boltzmann
// equation on a 1D momentum grid.
//
// Each collision channel (gas node k, transfer Q = s dP) carries the operator
//   V |P> = D(P) |P + Q>,   D(P) = f(k*_f, k*_i) delta_tau(E*_fi),
// with the shift truncated at the grid edge (amplitude leaving the grid is
// dropped; V^dagger V is built from the same truncated V, so the Lindblad
// trace identity is exact). Channel weights are
//   coupling * n_c * w_k * dQ / tau,
// where `coupling` stands in for 2 pi / m*^2 (its 3D value is the default)
// and the 1/tau of the rate stays explicit.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "qlbe/errors.hpp"
#include "qlbe/gas.hpp"
#include "qlbe/grid.hpp"
#include "qlbe/kinematics.hpp"

namespace qlbe {

struct LindbladChannel {
  /// Gas momentum node; NaN for channels that integrate over k internally.
  double k = std::numeric_limits<double>::quiet_NaN();
  int shift = 0;
  double weight = 0.0;
  /// D(P_i) on every grid point, applied before the shift.
  Eigen::VectorXcd factor;
};

struct GeneratorConfig {
  Masses masses{1.0, 1.0};
  GasMixture gas;
  ScatteringAmplitude amplitude;
  double tau = 1.0;
  int k_order = 32;
  std::vector<int> shifts{-1, 1};
  bool include_hamiltonian = false;
  std::optional<double> coupling;

  double resolved_coupling() const {
    if (coupling) return *coupling;
    const double ms = masses.reduced();
    return 2.0 * std::numbers::pi / (ms * ms);
  }

  void validate(const MomentumGrid& grid) const {
    if (!(tau > 0.0)) throw DomainError("GeneratorConfig: tau must be positive");
    if (k_order < 2) throw ConfigError("gas quadrature order must be >= 2", "generator.k_order");
    for (int s : shifts) {
      if (s == 0 || std::abs(s) >= grid.size()) {
        throw ConfigError("shifts must be nonzero with |shift| < N", "generator.shifts");
      }
    }
    if (!gas.empty() && gas.molecule_mass() != masses.molecule()) {
      throw ConfigError("gas molecule mass differs from masses.m", "masses.m");
    }
    if (!(resolved_coupling() >= 0.0)) {
      throw ConfigError("coupling must be non-negative", "generator.coupling");
    }
  }
};

/// D(P) = f(k*_f, k*_i) delta_tau(E*_fi) for one gas momentum and transfer.
inline Eigen::VectorXcd channel_factor(const GeneratorConfig& cfg, const MomentumGrid& grid,
                                       double k, int shift) {
  const double Q = shift * grid.spacing();
  const auto& ms = cfg.masses;
  Eigen::VectorXcd factor(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double P = grid.value(i);
    const double ki = (ms.particle() * k - ms.molecule() * P) / ms.total();
    const double kf = ki - Q;
    const double E = (ki * ki - kf * kf) / (2.0 * ms.reduced());
    factor(i) = amplitude_eval_1d(cfg.amplitude, kf, ki) * delta_tau(E, cfg.tau);
  }
  return factor;
}

/// One channel per (component, gas node, shift). Components with zero
/// density contribute nothing. Channels of a mixture are the concatenation
/// of the channels of its components.
inline std::vector<LindbladChannel> build_channels(const GeneratorConfig& cfg,
                                                   const MomentumGrid& grid) {
  cfg.validate(grid);
  const double prefactor = cfg.resolved_coupling() * grid.spacing() / cfg.tau;
  std::vector<LindbladChannel> channels;
  for (const auto& comp : cfg.gas.components()) {
    if (comp.n_g == 0.0) continue;
    for (const auto& node : gas_quadrature(comp, 1, cfg.k_order)) {
      const double k = node.k(0);
      for (int s : cfg.shifts) {
        channels.push_back({k, s, prefactor * comp.n_g * node.weight,
                            channel_factor(cfg, grid, k, s)});
      }
    }
  }
  return channels;
}

/// Schematic square-root-kernel generator: one channel per shift whose factor
/// carries sqrt(n rho_mix(k~(P, Q)) m / |Q|), k~ the on-shell gas momentum.
/// Populations see exactly the classical on-shell rates; coherences between
/// P and P' see the geometric mean of the two gas weights.
inline std::vector<LindbladChannel> build_sqrt_variant_channels(const GeneratorConfig& cfg,
                                                                const MomentumGrid& grid) {
  cfg.validate(grid);
  std::vector<LindbladChannel> channels;
  if (cfg.gas.empty() || cfg.gas.total_density() == 0.0) return channels;
  const double m = cfg.masses.molecule();
  const double weight = cfg.resolved_coupling() * grid.spacing() / (2.0 * std::numbers::pi);
  for (int s : cfg.shifts) {
    const double Q = s * grid.spacing();
    // On shell in 1D: k*_i = Q/2, k*_f = -Q/2.
    const auto f = amplitude_eval_1d(cfg.amplitude, -0.5 * Q, 0.5 * Q);
    LindbladChannel ch;
    ch.shift = s;
    ch.weight = weight;
    ch.factor.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      const double k_root = on_shell_gas_momentum_1d(grid.value(i), Q, cfg.masses);
      const double density = mixture_density_1d(k_root, cfg.gas);
      ch.factor(i) = std::sqrt(density * m / std::abs(Q)) * f;
    }
    channels.push_back(std::move(ch));
  }
  return channels;
}

namespace detail {

inline void check_channel(const LindbladChannel& c, int N) {
  if (c.factor.size() != N) {
    throw ContractViolation("channel factor does not match the density-matrix grid");
  }
  if (std::abs(c.shift) >= N && N > 0) {
    throw ContractViolation("channel shift exceeds the grid");
  }
}

}  // namespace detail

/// sum_c w_c (V rho V^dagger - {V^dagger V, rho} / 2), channel by channel.
inline Matrix apply_dissipator(const std::vector<LindbladChannel>& channels, const Matrix& rho) {
  const int N = static_cast<int>(rho.rows());
  if (rho.cols() != N) throw ContractViolation("apply_dissipator: rho must be square");
  Matrix out = Matrix::Zero(N, N);
  Eigen::VectorXd loss(N);
  for (const auto& c : channels) {
    detail::check_channel(c, N);
    const int s = c.shift;
    for (int i = 0; i < N; ++i) {
      const bool lands = i + s >= 0 && i + s < N;
      loss(i) = lands ? c.weight * std::norm(c.factor(i)) : 0.0;
    }
    const int lo = std::max(0, s);
    const int hi = std::min(N, N + s);
    for (int b = 0; b < N; ++b) {
      for (int a = 0; a < N; ++a) {
        out(a, b) -= 0.5 * (loss(a) + loss(b)) * rho(a, b);
      }
    }
    for (int b = lo; b < hi; ++b) {
      const Complex db = std::conj(c.factor(b - s));
      for (int a = lo; a < hi; ++a) {
        out(a, b) += c.weight * c.factor(a - s) * rho(a - s, b - s) * db;
      }
    }
  }
  return out;
}

inline Matrix apply_dissipator(const std::vector<LindbladChannel>& channels,
                               const DensityMatrix& rho) {
  return apply_dissipator(channels, rho.elements);
}

/// -i [P^2 / 2M, rho].
inline Matrix apply_hamiltonian(const DensityMatrix& rho, const Masses& masses) {
  const int N = rho.grid.size();
  Matrix out(N, N);
  for (int b = 0; b < N; ++b) {
    const double Pb = rho.grid.value(b);
    for (int a = 0; a < N; ++a) {
      const double Pa = rho.grid.value(a);
      out(a, b) = Complex(0.0, -(Pa * Pa - Pb * Pb) / (2.0 * masses.particle())) * rho.elements(a, b);
    }
  }
  return out;
}

/// Generator with the channels folded into one kernel per shift:
///   G_s(a, b) = sum_{channels with shift s} w D(a) conj(D(b)),
/// so one application costs O(#shifts N^2) regardless of the gas node count.
/// Shifts are processed in ascending order, channels in the given order.
class Generator {
 public:
  Generator(MomentumGrid grid, const std::vector<LindbladChannel>& channels,
            std::optional<Masses> hamiltonian = std::nullopt)
      : grid_(grid), hamiltonian_(hamiltonian) {
    const int N = grid_.size();
    for (const auto& c : channels) {
      detail::check_channel(c, N);
      auto it = std::find_if(blocks_.begin(), blocks_.end(),
                             [&](const Block& b) { return b.shift == c.shift; });
      if (it == blocks_.end()) {
        blocks_.push_back({c.shift, Matrix::Zero(N, N), Eigen::VectorXd::Zero(N)});
        it = std::prev(blocks_.end());
      }
      it->kernel.noalias() += c.weight * c.factor * c.factor.adjoint();
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& x, const Block& y) { return x.shift < y.shift; });
    for (auto& b : blocks_) {
      for (int i = 0; i < N; ++i) {
        const bool lands = i + b.shift >= 0 && i + b.shift < N;
        b.loss(i) = lands ? b.kernel(i, i).real() : 0.0;
      }
    }
  }

  const MomentumGrid& grid() const { return grid_; }
  bool has_hamiltonian() const { return hamiltonian_.has_value(); }

  Matrix apply(const Matrix& rho) const {
    const int N = grid_.size();
    if (rho.rows() != N || rho.cols() != N) {
      throw ContractViolation("Generator::apply: rho does not match the grid");
    }
    Matrix out = Matrix::Zero(N, N);
    for (const auto& blk : blocks_) {
      const int s = blk.shift;
      const int lo = std::max(0, s);
      const int hi = std::min(N, N + s);
      for (int b = 0; b < N; ++b) {
        for (int a = 0; a < N; ++a) out(a, b) -= 0.5 * (blk.loss(a) + blk.loss(b)) * rho(a, b);
      }
      for (int b = lo; b < hi; ++b) {
        for (int a = lo; a < hi; ++a) out(a, b) += blk.kernel(a - s, b - s) * rho(a - s, b - s);
      }
    }
    if (hamiltonian_) out += apply_hamiltonian(DensityMatrix(grid_, rho), *hamiltonian_);
    return out;
  }

  Matrix apply(const DensityMatrix& rho) const { return apply(rho.elements); }

  /// Upper bound on the magnitude of the generator's eigenvalues: twice the
  /// largest total escape rate (gain and loss parts) plus the largest
  /// Hamiltonian frequency.
  double spectral_bound() const {
    const int N = grid_.size();
    double escape = 0.0;
    for (int i = 0; i < N; ++i) {
      double total = 0.0;
      for (const auto& b : blocks_) total += b.loss(i);
      escape = std::max(escape, total);
    }
    double bound = 2.0 * escape;
    if (hamiltonian_) {
      const double pmax = grid_.value(N - 1);
      bound += pmax * pmax / (2.0 * hamiltonian_->particle());
    }
    return bound;
  }

  /// Total rate P_i -> P_i + s dP of the population dynamics, or 0 if the
  /// generator has no such shift.
  double population_rate(int i, int shift) const {
    for (const auto& b : blocks_) {
      if (b.shift == shift) return b.loss(i);
    }
    return 0.0;
  }

 private:
  struct Block {
    int shift;
    Matrix kernel;
    Eigen::VectorXd loss;
  };

  MomentumGrid grid_;
  std::optional<Masses> hamiltonian_;
  std::vector<Block> blocks_;
};

inline Generator make_generator(const GeneratorConfig& cfg, const MomentumGrid& grid) {
  auto channels = build_channels(cfg, grid);
  return Generator(grid, channels,
                   cfg.include_hamiltonian ? std::optional<Masses>(cfg.masses) : std::nullopt);
}

enum class KernelVariant { linear, sqrt_kernel };

struct AdditivityDefect {
  /// max |L_mix(X) - L_1(X) - L_2(X)| over probes X and all matrix elements.
  double max_defect = 0.0;
  /// Same, restricted to off-diagonal output elements.
  double coherence_defect = 0.0;
  /// Same, restricted to diagonal output elements.
  double population_defect = 0.0;
};

/// Compares the dissipator of a two-component gas with the sum of the
/// single-component dissipators on the hermitian matrix-unit basis
/// {E_ii, E_ij + E_ji, i (E_ij - E_ji)}. The Hamiltonian is left out: it is
/// not a gas contribution.
inline AdditivityDefect additivity_defect(const GeneratorConfig& cfg, const MomentumGrid& grid,
                                          KernelVariant variant) {
  const auto& comps = cfg.gas.components();
  if (comps.size() != 2) throw DomainError("additivity_defect: need exactly two gas components");
  auto build = [&](const GeneratorConfig& c) {
    return Generator(grid, variant == KernelVariant::linear ? build_channels(c, grid)
                                                            : build_sqrt_variant_channels(c, grid));
  };
  GeneratorConfig one = cfg;
  one.gas = GasMixture({comps[0]});
  GeneratorConfig two = cfg;
  two.gas = GasMixture({comps[1]});
  const Generator mix = build(cfg);
  const Generator g1 = build(one);
  const Generator g2 = build(two);

  const int N = grid.size();
  AdditivityDefect out;
  auto probe = [&](const Matrix& X) {
    const Matrix diff = mix.apply(X) - g1.apply(X) - g2.apply(X);
    for (int b = 0; b < N; ++b) {
      for (int a = 0; a < N; ++a) {
        const double v = std::abs(diff(a, b));
        out.max_defect = std::max(out.max_defect, v);
        if (a == b) {
          out.population_defect = std::max(out.population_defect, v);
        } else {
          out.coherence_defect = std::max(out.coherence_defect, v);
        }
      }
    }
  };
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      Matrix X = Matrix::Zero(N, N);
      if (i == j) {
        X(i, i) = 1.0;
        probe(X);
        continue;
      }
      X(i, j) = 1.0;
      X(j, i) = 1.0;
      probe(X);
      X(i, j) = Complex(0.0, 1.0);
      X(j, i) = Complex(0.0, -1.0);
      probe(X);
    }
  }
  return out;
}

}  // namespace qlbe
