// Copyright 2026 The amsim Authors
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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "amsim/rbfnn.hpp"
#include "oracles.hpp"

namespace amsim {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

RbfNetwork random_network(std::mt19937_64& rng, int nodes, int dim, double eta = 0.1) {
  std::uniform_real_distribution<double> c(-1.0, 1.0), b(0.3, 2.0);
  MatrixXd centers(nodes, dim);
  VectorXd widths(nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < dim; ++j) centers(i, j) = c(rng);
    widths[i] = b(rng);
  }
  return RbfNetwork(centers, widths, eta);
}

VectorXd random_input(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  VectorXd x(dim);
  for (int j = 0; j < dim; ++j) x[j] = c(rng);
  return x;
}

TEST(Basis, CenterHitIsOne) {
  std::mt19937_64 rng(1);
  const RbfNetwork net = random_network(rng, 5, 3);
  const VectorXd s = net.basis(net.centers().row(2).transpose());
  EXPECT_EQ(s[2], 1.0);
  for (int i = 0; i < 5; ++i) {
    EXPECT_GT(s[i], 0.0);
    EXPECT_LE(s[i], 1.0);
  }
}

TEST(Basis, OneWidthAwayIsInverseE) {
  MatrixXd c = MatrixXd::Zero(1, 2);
  const RbfNetwork net(c, VectorXd::Constant(1, 0.7), 0.5);
  VectorXd x(2);
  x << 0.7 / std::sqrt(2.0), -0.7 / std::sqrt(2.0);
  EXPECT_NEAR(net.basis(x)[0], std::exp(-1.0), 1e-15);
}

TEST(Basis, MatchesScalarFormula) {
  std::mt19937_64 rng(2);
  const RbfNetwork net = random_network(rng, 25, 12);
  for (int n = 0; n < 100; ++n) {
    const VectorXd x = random_input(rng, 12);
    const VectorXd s = net.basis(x);
    for (int i = 0; i < 25; ++i) {
      const VectorXd c = net.centers().row(i).transpose();
      EXPECT_NEAR(s[i], oracle::gaussian(x.data(), c.data(), 12, net.widths()[i]), 1e-15);
    }
  }
}

TEST(Basis, DimensionMismatchThrows) {
  std::mt19937_64 rng(3);
  const RbfNetwork net = random_network(rng, 4, 3);
  EXPECT_THROW(net.basis(VectorXd::Zero(2)), std::invalid_argument);
  EXPECT_THROW(net.evaluate(VectorXd::Zero(4)), std::invalid_argument);
}

TEST(Network, InvariantsEnforced) {
  const MatrixXd c = MatrixXd::Zero(2, 3);
  EXPECT_THROW(RbfNetwork(c, VectorXd::Constant(2, 0.0), 0.1), std::invalid_argument);
  EXPECT_THROW(RbfNetwork(c, VectorXd::Constant(3, 1.0), 0.1), std::invalid_argument);
  EXPECT_THROW(RbfNetwork(c, VectorXd::Constant(2, 1.0), 1.0), std::invalid_argument);
  EXPECT_THROW(RbfNetwork(c, VectorXd::Constant(2, 1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(RbfNetwork(MatrixXd(0, 3), VectorXd(0), 0.1), std::invalid_argument);
}

TEST(Evaluate, ZeroWeightsGiveZero) {
  std::mt19937_64 rng(4);
  const RbfNetwork net = random_network(rng, 10, 4);
  EXPECT_EQ(net.evaluate(random_input(rng, 4)), 0.0);
}

TEST(Evaluate, SingleNodeAtCenter) {
  RbfNetwork net(MatrixXd::Constant(1, 2, 0.3), VectorXd::Constant(1, 1.0), 0.1);
  net.set_weights(VectorXd::Constant(1, -2.5));
  EXPECT_EQ(net.evaluate(VectorXd::Constant(2, 0.3)), -2.5);
}

TEST(Evaluate, LinearInWeights) {
  std::mt19937_64 rng(5);
  RbfNetwork net = random_network(rng, 8, 3);
  const VectorXd x = random_input(rng, 3);
  const VectorXd w1 = VectorXd::Random(8), w2 = VectorXd::Random(8);
  net.set_weights(w1);
  const double y1 = net.evaluate(x);
  net.set_weights(w2);
  const double y2 = net.evaluate(x);
  net.set_weights(w1 + w2);
  EXPECT_NEAR(net.evaluate(x), y1 + y2, 1e-14);
}

TEST(OgdUpdate, ZeroErrorLeavesWeights) {
  std::mt19937_64 rng(6);
  RbfNetwork net = random_network(rng, 6, 3);
  net.set_weights(VectorXd::Constant(6, 0.4));
  EXPECT_TRUE(net.ogd_update(0.0, random_input(rng, 3)));
  EXPECT_EQ(net.weights(), VectorXd::Constant(6, 0.4));
}

TEST(OgdUpdate, SingleNodeStep) {
  RbfNetwork net(MatrixXd::Zero(1, 2), VectorXd::Constant(1, 1.0), 0.1);
  EXPECT_TRUE(net.ogd_update(1.0, VectorXd::Zero(2)));
  EXPECT_DOUBLE_EQ(net.weights()[0], 0.1);
}

TEST(OgdUpdate, ExactFormulaPerCall) {
  std::mt19937_64 rng(7);
  RbfNetwork net = random_network(rng, 12, 5, 0.03);
  for (int n = 0; n < 20; ++n) {
    const VectorXd x = random_input(rng, 5);
    const VectorXd before = net.weights();
    const double e = std::sin(n);
    net.ogd_update(e, x);
    EXPECT_LT((net.weights() - (before + 0.03 * e * net.basis(x))).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(OgdUpdate, NonFiniteErrorRejected) {
  std::mt19937_64 rng(8);
  RbfNetwork net = random_network(rng, 4, 2);
  const VectorXd x = random_input(rng, 2);
  EXPECT_FALSE(net.ogd_update(std::numeric_limits<double>::quiet_NaN(), x));
  EXPECT_FALSE(net.ogd_update(std::numeric_limits<double>::infinity(), x));
  EXPECT_EQ(net.weights(), VectorXd::Zero(4));
}

TEST(OgdUpdate, GeometricConvergenceToConstant) {
  std::mt19937_64 rng(9);
  RbfNetwork net = random_network(rng, 25, 12, 0.03);
  const VectorXd x = random_input(rng, 12);
  const double s2 = net.basis(x).squaredNorm();
  const double ratio = 1.0 - 0.03 * s2;
  const double f = 1.119;
  double expected_gap = f;
  for (int k = 0; k < 50; ++k) {
    net.ogd_update(f - net.evaluate(x), x);
    expected_gap *= ratio;
    EXPECT_NEAR(f - net.evaluate(x), expected_gap, 1e-12);
  }
}

TEST(OgdUpdate, LearnsConstantWithinTwoSeconds) {
  // Scalar tracking-error plant driven by a constant disturbance f and the
  // network compensation, sampled at 500 Hz.
  const VectorXd lo = VectorXd::Constant(12, -0.1), hi = VectorXd::Constant(12, 0.1);
  RbfNetwork net = make_lhs_network(lo, hi, 25, 2.0, 0.04, 3);
  const double f = 3.75 / 3.352, k = 0.9, dt = 0.002;
  double z = 0.0;
  ErrorSignal err;
  const VectorXd x = VectorXd::Zero(12);
  for (int n = 0; n < 1000; ++n) {
    const double e = err.update(z, 0.0, k, dt);
    net.ogd_update(e, x);
    z += dt * (-k * z + f - net.evaluate(x));
  }
  EXPECT_LT(std::abs(net.evaluate(x) - f), 0.1 * f);
}

TEST(ErrorSignal, ConstantChannelIsZero) {
  EXPECT_EQ(error_signal(0.4, 0.4, 0.0, 0.0, 0.002), 0.0);
  ErrorSignal e;
  EXPECT_EQ(e.update(0.4, 0.0, 0.0, 0.002), 0.0);
  EXPECT_EQ(e.update(0.4, 0.0, 0.0, 0.002), 0.0);
}

TEST(ErrorSignal, RampGivesSlope) {
  ErrorSignal e;
  const double dt = 0.002, slope = 1.7;
  EXPECT_EQ(e.update(0.0, 0.0, 0.0, dt), 0.0);
  for (int n = 1; n < 10; ++n) EXPECT_NEAR(e.update(slope * n * dt, 0.0, 0.0, dt), slope, 1e-12);
}

TEST(ErrorSignal, FullFormula) {
  EXPECT_NEAR(error_signal(0.1, 0.3, -0.2, 2.5, 0.01), 20.0 - 0.2 + 0.75, 1e-12);
}

TEST(ErrorSignal, NoiseScalesInverselyWithPeriod) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> noise(0.0, 1e-4);
  auto rms = [&](double dt) {
    ErrorSignal e;
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double v = e.update(noise(rng), 0.0, 0.0, dt);
      acc += v * v;
    }
    return std::sqrt(acc / n);
  };
  const double r1 = rms(0.002), r2 = rms(0.001);
  EXPECT_NEAR(r1, std::sqrt(2.0) * 1e-4 / 0.002, 0.05 * r1);
  EXPECT_NEAR(r2 / r1, 2.0, 0.1);
}

TEST(ErrorSignal, LowPassAttenuatesNoise) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1e-4);
  ErrorSignal raw, filtered(200.0);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = noise(rng);
    const double r = raw.update(z, 0.0, 0.0, 0.002), f = filtered.update(z, 0.0, 0.0, 0.002);
    a += r * r;
    b += f * f;
  }
  EXPECT_LT(b, 0.5 * a);
}

TEST(LatinHypercube, OnePointPerStratum) {
  VectorXd lo(3), hi(3);
  lo << -1.0, 0.0, 5.0;
  hi << 1.0, 2.0, 6.0;
  const int n = 25;
  const MatrixXd c = latin_hypercube(lo, hi, n, 42);
  for (int d = 0; d < 3; ++d) {
    std::vector<int> hits(n, 0);
    for (int i = 0; i < n; ++i) {
      const double u = (c(i, d) - lo[d]) / (hi[d] - lo[d]);
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
      ++hits[static_cast<int>(u * n)];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(LatinHypercube, SeedDeterminism) {
  const VectorXd lo = VectorXd::Constant(12, -1.0), hi = VectorXd::Constant(12, 1.0);
  EXPECT_EQ(latin_hypercube(lo, hi, 25, 7), latin_hypercube(lo, hi, 25, 7));
  EXPECT_NE(latin_hypercube(lo, hi, 25, 7), latin_hypercube(lo, hi, 25, 8));
}

TEST(MakeLhsNetwork, WidthIsScaledNearestDistance) {
  const VectorXd lo = VectorXd::Constant(12, -1.0), hi = VectorXd::Constant(12, 1.0);
  const RbfNetwork net = make_lhs_network(lo, hi, 25, 2.0, 0.03, 5);
  // Brute-force nearest-neighbour mean.
  double sum = 0.0;
  for (int i = 0; i < 25; ++i) {
    double best = 1e300;
    for (int j = 0; j < 25; ++j) {
      if (i != j) best = std::min(best, (net.centers().row(i) - net.centers().row(j)).norm());
    }
    sum += best;
  }
  for (int i = 0; i < 25; ++i) EXPECT_NEAR(net.widths()[i], 2.0 * sum / 25.0, 1e-14);
  EXPECT_EQ(net.weights(), VectorXd::Zero(25));
  EXPECT_DOUBLE_EQ(net.learning_rate(), 0.03);
}

}  // namespace
}  // namespace amsim
