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

#include <cmath>
#include <complex>
#include <numbers>
#include <variant>
#include <vector>

#include "qlbe/errors.hpp"
#include "qlbe/kinematics.hpp"
#include "qlbe/quadrature.hpp"

namespace qlbe {

/// One Maxwell–Boltzmann gas: molecule mass m, inverse temperature beta,
/// number density n_g.
struct GasComponent {
  double m = 1.0;
  double beta = 1.0;
  double n_g = 1.0;

  void validate() const {
    if (!(m > 0.0)) throw DomainError("GasComponent: m must be positive");
    if (!(beta > 0.0)) throw DomainError("GasComponent: beta must be positive");
    if (!(n_g >= 0.0)) throw DomainError("GasComponent: n_g must be non-negative");
  }
};

/// Independent components of the same molecular species.
class GasMixture {
 public:
  GasMixture() = default;
  explicit GasMixture(std::vector<GasComponent> components) : components_(std::move(components)) {
    for (const auto& c : components_) {
      c.validate();
      if (c.m != components_.front().m) {
        throw UnsupportedMixture("GasMixture: components must share the molecular mass");
      }
    }
  }

  const std::vector<GasComponent>& components() const { return components_; }
  bool empty() const { return components_.empty(); }
  double molecule_mass() const { return components_.empty() ? 0.0 : components_.front().m; }

  double total_density() const {
    double n = 0.0;
    for (const auto& c : components_) n += c.n_g;
    return n;
  }

 private:
  std::vector<GasComponent> components_;
};

struct ConstantAmplitude {
  double f0 = 1.0;
};

/// f0 exp(-|k_f - k_i|^2 / (2 w^2)).
struct GaussianAmplitude {
  double f0 = 1.0;
  double w = 1.0;
};

struct ScatteringAmplitude {
  std::variant<ConstantAmplitude, GaussianAmplitude> model = ConstantAmplitude{};
  /// Total cross section; an independent input, only used for tau.
  double sigma_total = 1.0;
};

/// Total cross section 4 pi |f0|^2 of a constant amplitude in three
/// dimensions. Convenience only; nothing derives sigma from f automatically.
inline double constant_amplitude_cross_section(const ConstantAmplitude& a) {
  return 4.0 * std::numbers::pi * a.f0 * a.f0;
}

inline double mb_density_1d(double k, const GasComponent& comp) {
  return std::sqrt(comp.beta / (2.0 * std::numbers::pi * comp.m)) *
         std::exp(-comp.beta * k * k / (2.0 * comp.m));
}

/// (beta / 2 pi m)^{d/2} exp(-beta k^2 / 2m).
inline double mb_density(const Vector& k, const GasComponent& comp, int d) {
  if (d != 1 && d != 3) throw DomainError("mb_density: dimension must be 1 or 3");
  if (k.size() != d) throw ContractViolation("mb_density: k has the wrong dimension");
  const double norm = std::pow(comp.beta / (2.0 * std::numbers::pi * comp.m), 0.5 * d);
  return norm * std::exp(-comp.beta * k.squaredNorm() / (2.0 * comp.m));
}

/// sum_c n_c rho_c(k).
inline double mixture_density(const Vector& k, const GasMixture& mix, int d) {
  if (mix.empty()) throw DomainError("mixture_density: mixture has no components");
  double total = 0.0;
  for (const auto& c : mix.components()) total += c.n_g * mb_density(k, c, d);
  return total;
}

inline double mixture_density_1d(double k, const GasMixture& mix) {
  if (mix.empty()) throw DomainError("mixture_density: mixture has no components");
  double total = 0.0;
  for (const auto& c : mix.components()) total += c.n_g * mb_density_1d(k, c);
  return total;
}

/// Amplitude as a function of (possibly off-shell) c.o.m. momenta.
inline std::complex<double> amplitude_eval(const ScatteringAmplitude& f, const Vector& k_f_star,
                                           const Vector& k_i_star) {
  if (const auto* c = std::get_if<ConstantAmplitude>(&f.model)) return c->f0;
  const auto& g = std::get<GaussianAmplitude>(f.model);
  const double q2 = (k_f_star - k_i_star).squaredNorm();
  return g.f0 * std::exp(-q2 / (2.0 * g.w * g.w));
}

inline std::complex<double> amplitude_eval_1d(const ScatteringAmplitude& f, double k_f_star,
                                              double k_i_star) {
  if (const auto* c = std::get_if<ConstantAmplitude>(&f.model)) return c->f0;
  const auto& g = std::get<GaussianAmplitude>(f.model);
  const double q = k_f_star - k_i_star;
  return g.f0 * std::exp(-q * q / (2.0 * g.w * g.w));
}

struct GasNode {
  Vector k;
  double weight = 0.0;
};

/// Gauss–Hermite nodes for the Maxwell–Boltzmann distribution: tensor product
/// of `order` points per axis, scaled to variance m / beta. Weights sum to 1.
inline std::vector<GasNode> gas_quadrature(const GasComponent& comp, int d, int order) {
  if (order < 2) throw DomainError("gas_quadrature: order must be >= 2");
  if (d != 1 && d != 3) throw DomainError("gas_quadrature: dimension must be 1 or 3");
  comp.validate();
  const auto rule = quadrature::gauss_hermite(order);
  const double scale = std::sqrt(2.0 * comp.m / comp.beta);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  std::vector<GasNode> nodes;
  if (d == 1) {
    nodes.reserve(order);
    for (int i = 0; i < order; ++i) {
      nodes.push_back({Vector::Constant(1, scale * rule.nodes[i]), norm * rule.weights[i]});
    }
    return nodes;
  }
  nodes.reserve(static_cast<std::size_t>(order) * order * order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      for (int l = 0; l < order; ++l) {
        Vector k(3);
        k << scale * rule.nodes[i], scale * rule.nodes[j], scale * rule.nodes[l];
        nodes.push_back({k, norm * norm * norm * rule.weights[i] * rule.weights[j] *
                                rule.weights[l]});
      }
    }
  }
  return nodes;
}

}  // namespace qlbe
