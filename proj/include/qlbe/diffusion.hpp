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

// Diffusion-limit constants of the heavy-particle master equation
//   d rho/dt = -i[H, rho] - D_pp [X,[X,rho]] - D_xx [P,[P,rho]] - i eta/(2M) [X,{P,rho}]
// computed by quadrature in three dimensions, together with the
// complete-positivity bound D_xx >= (beta / 4M)^2 D_pp.
//
// Radial transfer Q: Gauss–Legendre on t in (0, 1) mapped by Q = L t/(1 - t),
// L = sqrt(8 m / beta). Perpendicular gas momentum: tensor Gauss–Hermite.
// Both amplitude models are isotropic, so Q is put on the z axis and the
// solid angle contributes 4 pi.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "qlbe/errors.hpp"
#include "qlbe/gas.hpp"
#include "qlbe/kinematics.hpp"
#include "qlbe/quadrature.hpp"

namespace qlbe {

struct QuadratureOptions {
  int radial_order = 64;
  int perp_order = 8;
  /// Largest relative change allowed between (order) and (order + 4).
  double tol = 1e-8;
  /// Energy window of the [delta_tau']^2 integral, in half periods of
  /// tau E / 2.
  int inner_half_periods = 1000;
  /// Total Gauss–Legendre nodes (8 per panel) across that window.
  int inner_nodes = 32000;
};

struct MomentumDiffusion {
  double D_pp = 0.0;
  double eta = 0.0;
};

struct DiffusionConstants {
  double eta = 0.0;
  double D_pp = 0.0;
  double D_xx = 0.0;
  bool cp_satisfied = true;
  double cp_margin = 0.0;
};

namespace detail {

/// Weighted integral  int_0^inf dQ Q^power K(Q)  with
/// K(Q) = int d^2k_perp rho_g(k_perp + Q z/2) |f(k_perp - Q z/2, k_perp + Q z/2)|^2.
inline double radial_moment(const GasComponent& gas, const ScatteringAmplitude& f, int power,
                            int radial_order, int perp_order) {
  const auto radial = quadrature::gauss_legendre(radial_order);
  const auto perp = quadrature::gauss_hermite(perp_order);
  const double L = std::sqrt(8.0 * gas.m / gas.beta);
  const double kscale = std::sqrt(2.0 * gas.m / gas.beta);
  // rho_g(k_perp + Q z/2) = norm3 exp(-beta k_perp^2 / 2m) exp(-beta Q^2 / 8m); the
  // perpendicular Gaussian is absorbed by the Hermite weight.
  const double norm3 = std::pow(gas.beta / (2.0 * std::numbers::pi * gas.m), 1.5);
  const double jac_perp = kscale * kscale;
  double total = 0.0;
  Vector kf(3), ki(3);
  for (std::size_t r = 0; r < radial.size(); ++r) {
    const double t = 0.5 * (radial.nodes[r] + 1.0);
    const double Q = L * t / (1.0 - t);
    const double dQ = 0.5 * radial.weights[r] * L / ((1.0 - t) * (1.0 - t));
    double K = 0.0;
    for (std::size_t i = 0; i < perp.size(); ++i) {
      for (std::size_t j = 0; j < perp.size(); ++j) {
        const double kx = kscale * perp.nodes[i];
        const double ky = kscale * perp.nodes[j];
        kf << kx, ky, -0.5 * Q;
        ki << kx, ky, 0.5 * Q;
        K += perp.weights[i] * perp.weights[j] * std::norm(amplitude_eval(f, kf, ki));
      }
    }
    K *= jac_perp * norm3 * std::exp(-gas.beta * Q * Q / (8.0 * gas.m));
    total += dQ * std::pow(Q, power) * K;
  }
  return total;
}

inline double converged_radial_moment(const GasComponent& gas, const ScatteringAmplitude& f,
                                      int power, const QuadratureOptions& opts) {
  if (opts.radial_order < 2 || opts.perp_order < 1) {
    throw DomainError("QuadratureOptions: orders too small");
  }
  const double coarse = radial_moment(gas, f, power, opts.radial_order, opts.perp_order);
  const double fine = radial_moment(gas, f, power, opts.radial_order + 4, opts.perp_order + 4);
  const double scale = std::max(std::abs(fine), std::abs(coarse));
  if (scale > 0.0 && std::abs(fine - coarse) > opts.tol * scale) {
    throw AccuracyError("radial quadrature not converged: relative change " +
                        std::to_string(std::abs(fine - coarse) / scale));
  }
  return fine;
}

}  // namespace detail

/// D_pp = (1/6)(n_g/m) int d^3Q Q int d^2k_perp rho_g(k_perp + Q/2)
///        |f(k_perp - Q/2, k_perp + Q/2)|^2,  and eta = D_pp / beta.
inline MomentumDiffusion dpp_quadrature(const GasComponent& gas, const ScatteringAmplitude& f,
                                        const Masses& masses, const QuadratureOptions& opts = {}) {
  gas.validate();
  (void)masses;  // heavy-particle limit: the constants do not depend on M
  MomentumDiffusion out;
  if (gas.n_g == 0.0) return out;
  const double moment = detail::converged_radial_moment(gas, f, 3, opts);
  out.D_pp = (1.0 / 6.0) * (gas.n_g / gas.m) * 4.0 * std::numbers::pi * moment;
  out.eta = out.D_pp / gas.beta;
  return out;
}

/// (1/3)(tau / M)^2 D_pp.
inline double dxx_from_tau(double D_pp, double tau, const Masses& masses) {
  if (!(tau > 0.0)) throw DomainError("dxx_from_tau: tau must be positive");
  const double r = tau / masses.particle();
  return r * r * D_pp / 3.0;
}

/// (1 / 4 pi) int dOmega n n^T by Gauss–Legendre in cos(theta) times a
/// uniform azimuthal rule. Equals I/3 for order >= 2.
inline Eigen::Matrix3d angular_second_moment(int order) {
  const auto mu = quadrature::gauss_legendre(order);
  const int n_phi = 2 * order + 2;
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double c = mu.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const Eigen::Vector3d n(s * std::cos(phi), s * std::sin(phi), c);
      acc += mu.weights[i] * (2.0 * std::numbers::pi / n_phi) * n * n.transpose();
    }
  }
  return acc / (4.0 * std::numbers::pi);
}

/// D_xx from the second-order expansion of the generator in P: the square
/// of delta_tau' is integrated over the energy balance (k_par = m E / Q + Q/2),
/// rho_g and f are frozen at k_par = Q/2, and Q_i Q_j is replaced by its
/// angular average Q^2 delta_ij / 3:
///   D_xx = 2 / M^2 (2 pi n_g / (tau m^2)) int d^3Q K(Q) (m/Q) I_tau Q^2 / 3,
///   I_tau = int dE [delta_tau'(E)]^2.
inline double dxx_coefficient_quadrature(const GasComponent& gas, const ScatteringAmplitude& f,
                                         const Masses& masses, double tau,
                                         const QuadratureOptions& opts = {}) {
  if (!(tau > 0.0)) throw DomainError("dxx_coefficient_quadrature: tau must be positive");
  gas.validate();
  if (opts.inner_half_periods < 1 || opts.inner_nodes < 8) {
    throw DomainError("QuadratureOptions: inner window too small");
  }
  const int panels = opts.inner_nodes / 8;
  const double E_max = 2.0 * opts.inner_half_periods * std::numbers::pi / tau;
  const double panel_width = 2.0 * E_max / panels;
  if (panel_width > std::numbers::pi / tau * (1.0 + 1e-12)) {
    throw AccuracyError("inner node count does not resolve the delta_tau' oscillation");
  }
  if (gas.n_g == 0.0) return 0.0;
  const auto rule = quadrature::gauss_legendre(8);
  double inner = quadrature::composite(rule, -E_max, E_max, panels, [tau](double E) {
    const double d = delta_tau_prime(E, tau);
    return d * d;
  });
  const double X = opts.inner_half_periods * std::numbers::pi;
  inner += 2.0 * tau * tau * tau / (8.0 * std::numbers::pi * std::numbers::pi) *
           (0.5 / X - 1.0 / (12.0 * X * X * X));

  // d^3Q = 4 pi Q^2 dQ; the integrand carries (m/Q) * Q^2/3 on top of that.
  const double moment = detail::converged_radial_moment(gas, f, 3, opts);
  const double angular = 4.0 * std::numbers::pi * gas.m * inner / 3.0;
  const double M = masses.particle();
  return 2.0 / (M * M) * (2.0 * std::numbers::pi * gas.n_g / (tau * gas.m * gas.m)) * angular *
         moment;
}

struct CpVerdict {
  bool satisfied = true;
  double margin = 0.0;
};

/// D_xx >= (beta / 4M)^2 D_pp.
inline CpVerdict cp_check(const DiffusionConstants& c, double beta, const Masses& masses) {
  const double r = beta / (4.0 * masses.particle());
  const double margin = c.D_xx - r * r * c.D_pp;
  return {margin >= 0.0, margin};
}

/// tau at which (1/3)(tau/M)^2 D_pp meets the bound: sqrt(3) beta / 4.
inline double cp_threshold_tau(double beta) { return std::sqrt(3.0) * beta / 4.0; }

inline DiffusionConstants diffusion_constants(const GasComponent& gas,
                                              const ScatteringAmplitude& f, const Masses& masses,
                                              double tau, const QuadratureOptions& opts = {}) {
  const auto mom = dpp_quadrature(gas, f, masses, opts);
  DiffusionConstants c;
  c.D_pp = mom.D_pp;
  c.eta = mom.eta;
  c.D_xx = dxx_from_tau(c.D_pp, tau, masses);
  const auto cp = cp_check(c, gas.beta, masses);
  c.cp_satisfied = cp.satisfied;
  c.cp_margin = cp.margin;
  return c;
}

struct TauConstraintReport {
  double tau = 0.0;
  /// tau k_B T in units of hbar.
  double tau_kT = 0.0;
  double threshold = std::sqrt(3.0) / 4.0;
  bool satisfied = false;
  /// sqrt(m k_B T) / (sigma n_g); compared against an unspecified constant,
  /// so it is reported without a verdict.
  double density_ratio = 0.0;
};

inline TauConstraintReport tau_constraint_report(const GasComponent& gas, double sigma) {
  TauConstraintReport r;
  r.tau = intercollision_time(gas.beta, gas.m, sigma, gas.n_g);
  r.tau_kT = r.tau / gas.beta;
  // Equality counts as satisfied; allow for rounding in tau.
  r.satisfied = r.tau_kT >= r.threshold * (1.0 - 1e-12);
  r.density_ratio = std::sqrt(gas.m / gas.beta) / (sigma * gas.n_g);
  return r;
}

}  // namespace qlbe
