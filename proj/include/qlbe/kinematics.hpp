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

// Two-body collision kinematics, the finite-time energy delta and the
// intercollision time. Natural units throughout: hbar = k_B = 1.
//
// Sign convention for the centre-of-mass energy balance:
//   E*_fi = ((k*_i)^2 - (k*_f)^2) / (2 m*),
// which equals the laboratory-frame kinetic energy before the collision minus
// the energy after it. delta_tau is even, so nothing downstream depends on
// the sign.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>

#include "qlbe/errors.hpp"
#include "qlbe/quadrature.hpp"

namespace qlbe {

using Vector = Eigen::VectorXd;

/// Scale factors applied only when reports are written.
struct UnitSystem {
  double energy = 1.0;
  double time = 1.0;
  double length = 1.0;
};

/// Particle mass M and molecule mass m.
class Masses {
 public:
  Masses(double particle, double molecule) : particle_(particle), molecule_(molecule) {
    if (!(particle > 0.0) || !(molecule > 0.0)) {
      throw DomainError("Masses: both masses must be positive");
    }
  }

  double particle() const { return particle_; }
  double molecule() const { return molecule_; }
  /// M* = M + m.
  double total() const { return particle_ + molecule_; }
  /// m* = M m / (M + m).
  double reduced() const { return particle_ * molecule_ / (particle_ + molecule_); }

 private:
  double particle_;
  double molecule_;
};

struct ComFrame {
  Vector k_star_i;
  Vector k_star_f;
  double energy_balance = 0.0;
};

/// Centre-of-mass momenta for a collision of a molecule with momentum `k` and
/// a particle with (pre-collision) momentum `P` transferring `Q` to the
/// particle.
inline ComFrame com_momenta(const Vector& k, const Vector& P, const Vector& Q,
                            const Masses& masses) {
  const auto d = k.size();
  if (P.size() != d || Q.size() != d) {
    throw ContractViolation("com_momenta: k, P and Q must share a dimension");
  }
  if (d != 1 && d != 3) throw ContractViolation("com_momenta: dimension must be 1 or 3");
  ComFrame frame;
  frame.k_star_i = (masses.particle() / masses.total()) * k -
                   (masses.molecule() / masses.total()) * P;
  frame.k_star_f = frame.k_star_i - Q;
  frame.energy_balance =
      (frame.k_star_i.squaredNorm() - frame.k_star_f.squaredNorm()) / (2.0 * masses.reduced());
  return frame;
}

/// Scalar version of `com_momenta(...).energy_balance` in one dimension.
inline double energy_balance_1d(double k, double P, double Q, const Masses& masses) {
  const double ki = (masses.particle() * k - masses.molecule() * P) / masses.total();
  const double kf = ki - Q;
  return (ki * ki - kf * kf) / (2.0 * masses.reduced());
}

/// Gas momentum along Q for which a 1D collision with transfer Q conserves
/// energy exactly: k = (M*/2M) Q + (m/M) P.
inline double on_shell_gas_momentum_1d(double P, double Q, const Masses& masses) {
  return masses.total() / (2.0 * masses.particle()) * Q +
         masses.molecule() / masses.particle() * P;
}

/// Post-collision particle momentum component along the transfer, from energy
/// conservation given the molecule's momentum component along Q.
inline double p_parallel_after(double k_par, double Q_mag, const Masses& masses) {
  if (!(Q_mag > 0.0)) throw DomainError("p_parallel_after: Q_mag must be positive");
  const double ratio = masses.particle() / masses.molecule();
  return ratio * k_par - (ratio - 1.0) * 0.5 * Q_mag;
}

/// sin(tau E / 2) / (pi E). Peak tau/(2 pi) at E = 0, zeros at E = 2 pi n / tau.
inline double delta_tau(double E, double tau) {
  if (!(tau > 0.0)) throw DomainError("delta_tau: tau must be positive");
  const double x = 0.5 * tau * E;
  if (std::abs(tau * E) < 1e-4) {
    const double x2 = x * x;
    const double sinc =
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    return tau / (2.0 * std::numbers::pi) * sinc;
  }
  return std::sin(x) / (std::numbers::pi * E);
}

/// d delta_tau / dE.
inline double delta_tau_prime(double E, double tau) {
  if (!(tau > 0.0)) throw DomainError("delta_tau_prime: tau must be positive");
  const double x = 0.5 * tau * E;
  const double scale = tau * tau / (4.0 * std::numbers::pi);
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    // sinc'(x) = -x/3 + x^3/30 - x^5/840 + x^7/45360 - x^9/3991680
    const double dsinc =
        -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0))));
    return scale * dsinc;
  }
  return scale * (x * std::cos(x) - std::sin(x)) / (x * x);
}

/// Mean free time sqrt(pi beta m) / (sigma n_g).
inline double intercollision_time(double beta, double m, double sigma, double n_g) {
  if (!(beta > 0.0) || !(m > 0.0) || !(sigma > 0.0) || !(n_g > 0.0)) {
    throw DomainError("intercollision_time: all arguments must be positive");
  }
  return std::sqrt(std::numbers::pi * beta * m) / (sigma * n_g);
}

/// A truncated integral together with a bound on what the truncation dropped.
struct WindowedIntegral {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Integral of delta_tau over [-L, L], with L placed so that tau L / 2 =
/// (half_periods + 1/2) pi. There cos(tau L / 2) vanishes and the missing
/// tail is bounded by 2 / (pi z^2), z = tau L / 2.
inline WindowedIntegral integrate_delta_tau(double tau, int half_periods = 1000,
                                            int nodes_per_panel = 8) {
  if (!(tau > 0.0)) throw DomainError("integrate_delta_tau: tau must be positive");
  if (half_periods < 1) throw DomainError("integrate_delta_tau: half_periods must be >= 1");
  const double z = (half_periods + 0.5) * std::numbers::pi;
  const double L = 2.0 * z / tau;
  const auto rule = quadrature::gauss_legendre(nodes_per_panel);
  // Panels of width pi / tau; 2 (2 h + 1) of them tile [-L, L].
  const int panels = 2 * (2 * half_periods + 1);
  WindowedIntegral out;
  out.value = quadrature::composite(rule, -L, L, panels,
                                    [tau](double E) { return delta_tau(E, tau); });
  out.tail_bound = 2.0 / (std::numbers::pi * z * z);
  return out;
}

/// Integral of [delta_tau'(E)]^2 over the real line. The window covers
/// |tau E / 2| <= half_periods * pi; the tail beyond it is added from its
/// asymptotic expansion 1/(2X) - 1/(12 X^3) (per side, in units of
/// tau^3 / (8 pi^2)) and the first omitted term sets `tail_bound`.
/// Exact value: tau^3 / (24 pi).
inline WindowedIntegral integrate_delta_tau_prime_squared(double tau, int half_periods = 1000,
                                                          int nodes_per_panel = 8) {
  if (!(tau > 0.0)) throw DomainError("integrate_delta_tau_prime_squared: tau must be positive");
  if (half_periods < 1) {
    throw DomainError("integrate_delta_tau_prime_squared: half_periods must be >= 1");
  }
  const double X = half_periods * std::numbers::pi;
  const double E_max = 2.0 * X / tau;
  const auto rule = quadrature::gauss_legendre(nodes_per_panel);
  const int panels = 4 * half_periods;
  const double window = quadrature::composite(rule, -E_max, E_max, panels, [tau](double E) {
    const double d = delta_tau_prime(E, tau);
    return d * d;
  });
  const double scale = tau * tau * tau / (8.0 * std::numbers::pi * std::numbers::pi);
  const double tail = 2.0 * scale * (0.5 / X - 1.0 / (12.0 * X * X * X));
  WindowedIntegral out;
  out.value = window + tail;
  out.tail_bound = 2.0 * scale * 0.25 / std::pow(X, 5);
  return out;
}

}  // namespace qlbe
