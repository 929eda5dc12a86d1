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

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qlbe/errors.hpp"

namespace qlbe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Uniform 1D momentum grid P_i = (i - (N - 1) / 2) dP, symmetric about 0.
class MomentumGrid {
 public:
  MomentumGrid(int N, double dP) : N_(N), dP_(dP) {
    if (N < 4) throw DomainError("MomentumGrid: N must be >= 4");
    if (!(dP > 0.0)) throw DomainError("MomentumGrid: dP must be positive");
  }

  int size() const { return N_; }
  double spacing() const { return dP_; }
  double value(int i) const { return (i - 0.5 * (N_ - 1)) * dP_; }

  /// Index of the grid point equal to P (to within a millionth of a
  /// spacing), or -1.
  int index_of(double P) const {
    const double x = P / dP_ + 0.5 * (N_ - 1);
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6 || r < 0 || r >= N_) return -1;
    return static_cast<int>(r);
  }

  bool operator==(const MomentumGrid& o) const { return N_ == o.N_ && dP_ == o.dP_; }

 private:
  int N_;
  double dP_;
};

/// Particle state in the momentum basis. Elements are <P_i|rho|P_j> dP, so
/// the trace is the plain sum of the diagonal.
struct DensityMatrix {
  MomentumGrid grid;
  Matrix elements;

  DensityMatrix(MomentumGrid g, Matrix m) : grid(g), elements(std::move(m)) {
    if (elements.rows() != grid.size() || elements.cols() != grid.size()) {
      throw ContractViolation("DensityMatrix: element matrix does not match the grid");
    }
  }

  static DensityMatrix maximally_mixed(const MomentumGrid& g) {
    return {g, Matrix::Identity(g.size(), g.size()) / static_cast<double>(g.size())};
  }

  /// Projector onto the normalized superposition of the given grid indices
  /// with equal amplitudes.
  static DensityMatrix superposition(const MomentumGrid& g, int i, int j) {
    if (i < 0 || j < 0 || i >= g.size() || j >= g.size()) {
      throw DomainError("DensityMatrix::superposition: index off the grid");
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(g.size());
    psi(i) += 1.0;
    psi(j) += 1.0;
    psi.normalize();
    return {g, psi * psi.adjoint()};
  }

  /// Diagonal state with the given (normalized) populations.
  static DensityMatrix diagonal(const MomentumGrid& g, const Eigen::VectorXd& p) {
    if (p.size() != g.size()) throw ContractViolation("DensityMatrix::diagonal: size mismatch");
    return {g, p.cast<Complex>().asDiagonal()};
  }
};

inline Complex trace(const Matrix& m) { return m.trace(); }

/// max |m - m^dagger|.
inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void hermitize(Matrix& m) { m = 0.5 * (m + m.adjoint()).eval(); }

inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// sum_{i != j} |rho_ij|.
inline double coherence_l1(const Matrix& m) {
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

inline Eigen::VectorXd populations(const Matrix& m) { return m.diagonal().real(); }

inline double mean_momentum(const DensityMatrix& rho) {
  double mean = 0.0;
  for (int i = 0; i < rho.grid.size(); ++i) mean += rho.grid.value(i) * rho.elements(i, i).real();
  return mean;
}

inline double momentum_variance(const DensityMatrix& rho) {
  const double mean = mean_momentum(rho);
  double var = 0.0;
  for (int i = 0; i < rho.grid.size(); ++i) {
    const double d = rho.grid.value(i) - mean;
    var += d * d * rho.elements(i, i).real();
  }
  return var;
}

/// Population on the `width` outermost points at each end of the grid.
inline double edge_population(const Matrix& m, int width = 1) {
  const int N = static_cast<int>(m.rows());
  double total = 0.0;
  for (int i = 0; i < width && i < N; ++i) {
    total += m(i, i).real();
    if (N - 1 - i > i) total += m(N - 1 - i, N - 1 - i).real();
  }
  return total;
}

}  // namespace qlbe
