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

// Closed-loop controllers for the aerial manipulator.
//
//  * Adaptive neural-network backstepping (ANNB): backstepping position and
//    attitude loops with coupling-disturbance feedforward and one RBF network
//    per channel estimating the remaining disturbance online.
//  * Cascade PID: P position -> PID velocity -> thrust vector, P attitude ->
//    PID body rate -> torque.
//  * PID with the coupling-disturbance feedforward subtracted from the force
//    and torque commands.
//
// Error coordinates follow the backstepping construction:
//   z1 = x - x_d,  α1 = -k1 z1 + ẋ_d,  z2 = ẋ - α1   (likewise y, z)
//   z7 = φ - φ_d,  α4 = -k7 z7 + φ̇_d,  z8 = p - α4   (likewise θ, ψ)

#ifndef AMSIM_CONTROLLERS_HPP_
#define AMSIM_CONTROLLERS_HPP_

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "amsim/disturbance.hpp"
#include "amsim/dynamics.hpp"
#include "amsim/rbfnn.hpp"
#include "amsim/types.hpp"

namespace amsim {

struct BackstepGains {
  std::array<double, 12> k{2.0, 0.3, 2.0, 0.3, 2.5, 0.9,
                           4.0, 2.5, 4.0, 2.5, 9.2, 3.56};
  // Learning rate per channel (x, y, z, roll, pitch, yaw).
  std::array<double, 6> eta{0.006, 0.006, 0.04, 0.03, 0.03, 0.03};

  double gain(int index) const { return k[index - 1]; }  // 1-based like k1..k12
};

struct PidGains {
  double kp_xy = 5.0;
  double kp_z = 4.0;
  double kp_vxy = 1.5;
  double kp_vz = 5.0;
  double ki_vxy = 0.02;
  double ki_vz = 0.02;
  double kd_vxy = 1.0;
  double kd_vz = 1.0;
  double kp_roll_pitch = 6.5;
  double kp_yaw = 3.5;
  double kp_pq = 0.8;
  double kp_r = 2.0;
  double ki_pq = 0.2;
  double ki_r = 0.5;
  double kd_pq = 0.03;
  double kd_r = 0.02;
  // Bound on each integral term's contribution (m/s^2 for velocity, N m for
  // rate).
  double integral_limit = 1.0;
  // First-order low-pass on the derivative terms, rad/s; 0 disables it.
  double derivative_cutoff = 50.0;
};

struct ControlReference {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  double yaw = 0.0;
  double yaw_rate = 0.0;
};

struct AttitudeReference {
  Vec3 angles = Vec3::Zero();  // φ_d, θ_d, ψ_d
  Vec3 rates = Vec3::Zero();   // φ̇_d, θ̇_d, ψ̇_d
};

// Roll-channel gyroscopic term of the attitude law: the state-space form
// uses q·r, the literal alternative uses ψ·r.
enum class RollGyroTerm { kStateSpace, kLiteral };

struct PositionLaw {
  Vec3 u = Vec3::Zero();          // (u_x, u_y, u_z), inertial
  std::array<double, 6> z{};      // z1..z6
};

// Backstepping position law. `mass` is the total system mass.
PositionLaw annb_position(const UavState& state, const ControlReference& ref,
                          const BackstepGains& gains, double mass, double g,
                          const Vec3& nn_out, const Vec3& f_dis_hat);

struct ThrustAttitude {
  double thrust = 0.0;  // u_m
  double roll = 0.0;    // φ_d
  double pitch = 0.0;   // θ_d
  bool degenerate = false;  // |u| < kMinThrust, previous attitude held
  bool saturated = false;   // arcsin argument clamped to [-1, 1]
};

inline constexpr double kMinThrust = 1e-6;

// Inverts u = -u_m R(φ, θ, ψ) e3 for (u_m, φ_d, θ_d) at the given yaw.
ThrustAttitude thrust_attitude_extract(const Vec3& u, double yaw,
                                       double hold_roll = 0.0,
                                       double hold_pitch = 0.0);

// Forward map (u_m, φ, θ, ψ) -> (u_x, u_y, u_z).
Vec3 thrust_vector(double thrust, double roll, double pitch, double yaw);

struct AttitudeLaw {
  Vec3 torque = Vec3::Zero();
  std::array<double, 6> z{};  // z7..z12
};

// Backstepping attitude law. `J` holds the UAV principal moments.
AttitudeLaw annb_attitude(const UavState& state, const AttitudeReference& ref,
                          const BackstepGains& gains, const Vec3& J,
                          const Vec3& nn_out, const Vec3& tau_dis_hat,
                          RollGyroTerm roll_gyro = RollGyroTerm::kStateSpace);

// Where the controller gets the v̇, ω̇ used by the coupling feedforward.
enum class FeedforwardSource {
  kOff,        // no feedforward at all
  kEstimated,  // filtered backward differences of measured rates
  kTruth,      // plant accelerations via ControlInput::plant_response
};

struct ControlInput {
  double t = 0.0;
  UavState state{};
  ControlReference reference{};
  ManipulatorState manip{};
  // Plant accelerations produced by a candidate wrench; only consulted by
  // FeedforwardSource::kTruth.
  std::function<Accelerations(const ControlWrench&)> plant_response;
};

struct ControlOutput {
  ControlWrench wrench{};
  AttitudeReference attitude_cmd{};
  Wrench feedforward{};
  std::array<double, 6> nn{};       // per-channel network outputs
  std::array<double, 6> nn_error{};  // per-channel E_i
  std::array<double, 12> z{};        // z1..z12 (ANNB only)
  bool thrust_degenerate = false;
  bool attitude_saturated = false;
};

struct ActuatorLimits {
  bool enabled = false;
  double max_thrust_factor = 2.0;  // of m_s g
  double max_torque = 2.0;         // N m per axis
};

struct ControllerOptions {
  FeedforwardSource feedforward = FeedforwardSource::kEstimated;
  double estimator_cutoff = 50.0;         // rad/s, v̇/ω̇ and φ̇_d/θ̇_d filters
  ActuatorLimits limits{};
  int truth_iterations = 8;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual ControlOutput update(const ControlInput& in, double dt) = 0;
};

// Settings of the per-channel RBF networks.
struct NetworkOptions {
  bool enabled = true;
  bool learning = true;
  int nodes = 25;
  double width_factor = 2.0;
  bool dt_scaled_update = false;
  double error_cutoff = 0.0;  // rad/s, 0 disables the E low-pass
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(12, -1.0);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(12, 1.0);
  std::uint64_t seed = 1;
};

class AnnbController : public Controller {
 public:
  AnnbController(PlantModel model, BackstepGains gains, NetworkOptions nn,
                 ControllerOptions options,
                 RollGyroTerm roll_gyro = RollGyroTerm::kStateSpace);

  std::string name() const override { return "annb"; }
  ControlOutput update(const ControlInput& in, double dt) override;

  const std::vector<RbfNetwork>& networks() const { return networks_; }

 private:
  ControlOutput evaluate(const ControlInput& in, const Accelerations& acc,
                         double dt, bool commit);

  PlantModel model_;
  MassBudget masses_;
  BackstepGains gains_;
  NetworkOptions nn_options_;
  ControllerOptions options_;
  RollGyroTerm roll_gyro_;
  std::vector<RbfNetwork> networks_;
  std::array<ErrorSignal, 6> error_signals_;
  AccelerationEstimator estimator_;
  bool attitude_primed_ = false;
  Vec3 last_attitude_cmd_ = Vec3::Zero();
  Vec3 attitude_cmd_rate_ = Vec3::Zero();
};

class PidController : public Controller {
 public:
  PidController(PlantModel model, PidGains gains, bool use_feedforward,
                ControllerOptions options);

  std::string name() const override { return use_feedforward_ ? "pid_ff" : "pid"; }
  ControlOutput update(const ControlInput& in, double dt) override;

  // Cascade law with an explicit feedforward wrench (zero for plain PID).
  ControlOutput pid_ff(const UavState& state, const ControlReference& ref,
                       const Wrench& feedforward, double dt);
  ControlOutput pid_cascade(const UavState& state, const ControlReference& ref,
                            double dt) {
    return pid_ff(state, ref, Wrench::Zero(), dt);
  }

 private:
  PlantModel model_;
  MassBudget masses_;
  PidGains gains_;
  bool use_feedforward_;
  ControllerOptions options_;
  AccelerationEstimator estimator_;
  bool primed_ = false;
  Vec3 vel_integral_ = Vec3::Zero();
  Vec3 rate_integral_ = Vec3::Zero();
  Vec3 last_vel_error_ = Vec3::Zero();
  Vec3 last_rate_error_ = Vec3::Zero();
  Vec3 vel_derivative_ = Vec3::Zero();
  Vec3 rate_derivative_ = Vec3::Zero();
  Vec3 last_attitude_cmd_ = Vec3::Zero();
};

// Applies ActuatorLimits to a wrench.
ControlWrench saturate(const ControlWrench& u, const ActuatorLimits& limits,
                       double hover_thrust);

// NN input vector (x, ẋ, y, ẏ, z, ż, φ, p, θ, q, ψ, r).
Eigen::VectorXd network_input(const UavState& state);

double wrap_angle(double a);

}  // namespace amsim

#endif  // AMSIM_CONTROLLERS_HPP_
