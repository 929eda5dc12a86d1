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

// Gaussian quadrature rules. Nodes are generated at run time so the order can
// come from configuration.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "qlbe/errors.hpp"

namespace qlbe::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss–Legendre rule on [-1, 1]; Newton iteration on the three-term
/// recurrence, started from the Chebyshev-like asymptotic guess.
inline Rule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int n = 2; n <= order; ++n) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

/// Physicists' Gauss–Hermite rule for the weight exp(-x^2) on the real line
/// (weights sum to sqrt(pi)). Golub–Welsch on the symmetric Jacobi matrix.
inline Rule gauss_hermite(int order) {
  if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  // The eigenvector weights are only accurate in absolute terms, so the far
  // nodes are polished by Newton steps on the Hermite functions
  // psi_k = p_k exp(-x^2/2), which stay finite where p_k would overflow.
  const double pi_m4 = std::pow(std::numbers::pi, -0.25);
  auto hermite_functions = [&](double x) {
    double prev = 0.0;
    double cur = pi_m4 * std::exp(-0.5 * x * x);
    for (int k = 0; k < order; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    return std::pair{cur, prev};  // psi_n, psi_{n-1}
  };
  for (int i = 0; i < order; ++i) {
    double x = rule.nodes[i];
    auto [pn, pn1] = hermite_functions(x);
    for (int it = 0; it < 8 && pn1 != 0.0; ++it) {
      const double dx = pn / (std::sqrt(2.0 * order) * pn1);
      x -= dx;
      std::tie(pn, pn1) = hermite_functions(x);
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    if (pn1 == 0.0) continue;
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(-x * x - 2.0 * std::log(std::abs(pn1))) / order;
  }
  // Exact symmetry of the rule; the eigen-solver only gets it to rounding.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

/// Integrates `f` over [a, b] with `panels` equal panels of Gauss–Legendre
/// `rule`, summing panels left to right.
template <class F>
double composite(const Rule& rule, double a, double b, int panels, F&& f) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    total += 0.5 * h * panel;
  }
  return total;
}

}  // namespace qlbe::quadrature
