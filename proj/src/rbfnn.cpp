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

#include "amsim/rbfnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amsim {

RbfNetwork::RbfNetwork(Eigen::MatrixXd centers, Eigen::VectorXd widths,
                       double learning_rate)
    : centers_(std::move(centers)),
      widths_(std::move(widths)),
      weights_(Eigen::VectorXd::Zero(centers_.rows())),
      learning_rate_(learning_rate) {
  if (centers_.rows() < 1 || centers_.cols() < 1) {
    throw std::invalid_argument("RbfNetwork: need at least one node and one input");
  }
  if (widths_.size() != centers_.rows()) {
    throw std::invalid_argument("RbfNetwork: one width per node required");
  }
  if (!centers_.allFinite()) {
    throw std::invalid_argument("RbfNetwork: centers must be finite");
  }
  for (double b : widths_) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw std::invalid_argument("RbfNetwork: widths must be positive");
    }
  }
  if (!(learning_rate_ > 0.0 && learning_rate_ < 1.0)) {
    throw std::invalid_argument("RbfNetwork: learning rate must lie in (0, 1)");
  }
}

void RbfNetwork::set_weights(const Eigen::VectorXd& w) {
  if (w.size() != weights_.size()) {
    throw std::invalid_argument("RbfNetwork: weight vector size mismatch");
  }
  weights_ = w;
}

void RbfNetwork::check_input(const Eigen::VectorXd& x) const {
  if (x.size() != centers_.cols()) {
    throw std::invalid_argument("RbfNetwork: input has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(centers_.cols()));
  }
}

Eigen::VectorXd RbfNetwork::basis(const Eigen::VectorXd& x) const {
  check_input(x);
  Eigen::VectorXd s(nodes());
  for (int i = 0; i < nodes(); ++i) {
    const double d2 = (x.transpose() - centers_.row(i)).squaredNorm();
    s[i] = std::exp(-d2 / (widths_[i] * widths_[i]));
  }
  return s;
}

double RbfNetwork::evaluate(const Eigen::VectorXd& x) const {
  return weights_.dot(basis(x));
}

bool RbfNetwork::ogd_update(double error, const Eigen::VectorXd& x,
                            double scale) {
  if (!std::isfinite(error)) return false;
  weights_ += (scale * learning_rate_ * error) * basis(x);
  return true;
}

double error_signal(double z_prev, double z_curr, double z_odd, double k,
                    double dt) {
  return (z_curr - z_prev) / dt + z_odd + k * z_curr;
}

double ErrorSignal::update(double z_even, double z_odd, double k, double dt) {
  if (!primed_) {
    primed_ = true;
    last_z_ = z_even;
    return 0.0;
  }
  const double e = error_signal(last_z_, z_even, z_odd, k, dt);
  last_z_ = z_even;
  if (cutoff_ <= 0.0) return e;
  filtered_ += (1.0 - std::exp(-cutoff_ * dt)) * (e - filtered_);
  return filtered_;
}

namespace {

// Uniform double in [0, 1) built directly from the engine output so that
// the sequence does not depend on the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Eigen::MatrixXd latin_hypercube(const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper, int n,
                                std::uint64_t seed) {
  if (lower.size() != upper.size() || n < 1) {
    throw std::invalid_argument("latin_hypercube: bad bounds or sample count");
  }
  std::mt19937_64 rng(seed);
  const int dim = static_cast<int>(lower.size());
  Eigen::MatrixXd out(n, dim);
  std::vector<int> perm(n);
  for (int d = 0; d < dim; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int i = 0; i < n; ++i) {
      const double u = (perm[i] + unit_uniform(rng)) / n;
      out(i, d) = lower[d] + u * (upper[d] - lower[d]);
    }
  }
  return out;
}

double mean_nearest_center_distance(const Eigen::MatrixXd& centers) {
  const int n = static_cast<int>(centers.rows());
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      best = std::min(best, (centers.row(i) - centers.row(j)).norm());
    }
    sum += best;
  }
  return sum / n;
}

RbfNetwork make_lhs_network(const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, int nodes,
                            double width_factor, double learning_rate,
                            std::uint64_t seed) {
  Eigen::MatrixXd centers = latin_hypercube(lower, upper, nodes, seed);
  double width = width_factor * mean_nearest_center_distance(centers);
  if (!(width > 0.0)) {
    // Single node or degenerate box: fall back to the box diagonal.
    width = width_factor * std::max((upper - lower).norm(), 1e-9);
  }
  return RbfNetwork(std::move(centers), Eigen::VectorXd::Constant(nodes, width),
                    learning_rate);
}

}  // namespace amsim
