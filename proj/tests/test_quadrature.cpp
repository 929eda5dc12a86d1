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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlbe/quadrature.hpp"

namespace qlbe::quadrature {
namespace {

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int order : {1, 2, 5, 8, 33, 64}) {
    const auto r = gauss_legendre(order);
    for (int p = 0; p < 2 * order; ++p) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "order " << order << " power " << p;
    }
  }
}

TEST(GaussHermite, MomentsOfGaussian) {
  for (int order : {2, 3, 10, 40}) {
    const auto r = gauss_hermite(order);
    // int x^{2j} exp(-x^2) dx = Gamma(j + 1/2)
    for (int j = 0; j < order; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], 2 * j);
      const double exact = std::tgamma(j + 0.5);
      EXPECT_NEAR(sum / exact, 1.0, 1e-11) << "order " << order << " j " << j;
    }
  }
}

TEST(GaussHermite, TwoPointRule) {
  const auto r = gauss_hermite(2);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.weights[0], std::sqrt(std::numbers::pi) / 2.0, 1e-15);
}

TEST(Composite, MatchesAntiderivative) {
  const auto r = gauss_legendre(6);
  const double v = composite(r, 0.0, 3.0, 17, [](double x) { return std::sin(x); });
  EXPECT_NEAR(v, 1.0 - std::cos(3.0), 1e-14);
}

TEST(Quadrature, RejectsNonPositiveOrder) {
  EXPECT_THROW(gauss_legendre(0), DomainError);
  EXPECT_THROW(gauss_hermite(0), DomainError);
}

}  // namespace
}  // namespace qlbe::quadrature
