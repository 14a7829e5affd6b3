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

// Gaussian radial basis function network trained online by gradient descent.
//
//   s_i(X) = exp(-|X - C_i|^2 / b_i^2),   y = Wᵀ S(X),   W <- W + η E S(X)

#ifndef AMSIM_RBFNN_HPP_
#define AMSIM_RBFNN_HPP_

#include <cstdint>

#include <Eigen/Core>

namespace amsim {

class RbfNetwork {
 public:
  // centers: N x n, one center per row. Weights start at zero.
  // Throws std::invalid_argument when an invariant does not hold.
  RbfNetwork(Eigen::MatrixXd centers, Eigen::VectorXd widths,
             double learning_rate);

  int nodes() const { return static_cast<int>(centers_.rows()); }
  int input_dim() const { return static_cast<int>(centers_.cols()); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  const Eigen::VectorXd& widths() const { return widths_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double learning_rate() const { return learning_rate_; }

  void set_weights(const Eigen::VectorXd& w);

  // Throws std::invalid_argument on a dimension mismatch.
  Eigen::VectorXd basis(const Eigen::VectorXd& x) const;
  double evaluate(const Eigen::VectorXd& x) const;

  // One OGD step W += scale * η * E * S(X). A non-finite E leaves the
  // weights untouched and returns false.
  bool ogd_update(double error, const Eigen::VectorXd& x, double scale = 1.0);

 private:
  void check_input(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd centers_;
  Eigen::VectorXd widths_;
  Eigen::VectorXd weights_;
  double learning_rate_;
};

// E = ż_even + z_odd + k z_even with ż_even = (z_curr - z_prev) / dt.
double error_signal(double z_prev, double z_curr, double z_odd, double k,
                    double dt);

// Stateful form of error_signal: keeps the previous z_even sample and
// optionally low-passes the result. The first call returns 0.
class ErrorSignal {
 public:
  // cutoff <= 0 disables filtering.
  explicit ErrorSignal(double cutoff_rad_s = 0.0) : cutoff_(cutoff_rad_s) {}

  double update(double z_even, double z_odd, double k, double dt);
  void reset() { primed_ = false; filtered_ = 0.0; }

 private:
  double cutoff_;
  bool primed_ = false;
  double last_z_ = 0.0;
  double filtered_ = 0.0;
};

// Latin-hypercube sample of `n` points inside the box [lower, upper].
Eigen::MatrixXd latin_hypercube(const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper, int n,
                                std::uint64_t seed);

double mean_nearest_center_distance(const Eigen::MatrixXd& centers);

// Network with LHS centers in the box and a common width equal to
// width_factor times the mean nearest-center distance.
RbfNetwork make_lhs_network(const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, int nodes,
                            double width_factor, double learning_rate,
                            std::uint64_t seed);

}  // namespace amsim

#endif  // AMSIM_RBFNN_HPP_
