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

// Coupled UAV + arm rigid-body dynamics.
//
// Frames: inertial NED (gravity +g e3) and a body frame at the UAV CoM with
// z pointing down. Thrust acts along -z_B. The arm joints are kinematically
// prescribed, so the free coordinates are the UAV position and attitude.
//
// The translational and rotational momentum balances are coupled through
// the accelerations themselves (ω̇ enters the force balance through the arm
// CoM, r̈_o enters the torque balance through the system CoM), so both are
// assembled into a single 6x6 linear system and solved together.

#ifndef AMSIM_DYNAMICS_HPP_
#define AMSIM_DYNAMICS_HPP_

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "amsim/inertia.hpp"
#include "amsim/kinematics.hpp"
#include "amsim/types.hpp"

namespace amsim {

struct UavState {
  Vec3 position = Vec3::Zero();    // m, inertial NED
  Vec3 velocity = Vec3::Zero();    // m/s, inertial
  Vec3 euler = Vec3::Zero();       // roll, pitch, yaw (Z-Y-X), rad
  Vec3 body_rates = Vec3::Zero();  // p, q, r in rad/s

  bool finite() const;
};

struct UavParams {
  double m_b = 2.65;
  Vec3 J = Vec3(0.05, 0.05, 0.0948);  // diagonal moments, kg m^2
  double g = 9.81;
};

struct ControlWrench {
  double thrust = 0.0;          // N, along -z_B
  Vec3 torque = Vec3::Zero();   // N m, body frame
};

// How Euler-angle rates relate to body rates. The reference model equates
// them (small-angle assumption); the exact Z-Y-X map is available for
// studies that need a geometrically consistent attitude.
enum class AttitudeKinematics { kBodyRatesAsEulerRates, kExact };

struct PlantModel {
  ArmModel arm = canonical_arm();
  UavParams uav{};
  AttitudeKinematics attitude_kinematics =
      AttitudeKinematics::kBodyRatesAsEulerRates;

  MassBudget masses() const { return make_mass_budget(arm, uav.m_b); }
};

struct Accelerations {
  Vec3 v_dot = Vec3::Zero();      // inertial, m/s^2
  Vec3 omega_dot = Vec3::Zero();  // body, rad/s^2
};

using Vec6 = Eigen::Matrix<double, 6, 1>;
using StateVector = Eigen::Matrix<double, 12, 1>;

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Pitch magnitude at which the Euler parameterization is rejected.
inline constexpr double kPitchLimit = kPi / 2.0 - 1e-3;

// ᴵR_B for Z-Y-X Euler angles (roll, pitch, yaw).
Mat3 rotation_from_euler(const Vec3& euler);

// Solves both momentum balances for (v̇, ω̇). f_ext.force is inertial,
// f_ext.torque is body. Throws SingularSystemError.
Accelerations assemble_accelerations(const PlantModel& model,
                                     const UavState& uav,
                                     const InertiaParams& ip,
                                     const ControlWrench& u,
                                     const Wrench& f_ext);

// Residual of the two balance equations evaluated term by term at `acc`:
// first three entries are the force balance divided by m_s (m/s^2), last
// three the torque balance (N m).
Vec6 balance_residual(const PlantModel& model, const UavState& uav,
                      const InertiaParams& ip, const ControlWrench& u,
                      const Wrench& f_ext, const Accelerations& acc);

// Total linear momentum of UAV + arm (inertial frame).
Vec3 linear_momentum(const PlantModel& model, const UavState& uav,
                     const InertiaParams& ip);

// Resultant external force on the system (inertial frame).
Vec3 external_force(const PlantModel& model, const UavState& uav,
                    const ControlWrench& u, const Wrench& f_ext);

// Euler-angle rates implied by the body rates under the model's attitude
// kinematics.
Vec3 euler_rates(const PlantModel& model, const UavState& uav);

// State vector ordered (x, ẋ, y, ẏ, z, ż, φ, p, θ, q, ψ, r).
StateVector to_state_vector(const UavState& s);
UavState from_state_vector(const StateVector& x);

// Throws DomainError when the pitch guard is violated.
StateVector state_derivative(const PlantModel& model, const UavState& uav,
                             const ManipulatorState& manip,
                             const ControlWrench& u, const Wrench& f_ext);

using JointTrajectory = std::function<ManipulatorState(double)>;
using ExternalWrenchFn = std::function<Wrench(double)>;

// Classical RK4 over [t, t+dt] with the control wrench held constant and the
// arm state sampled from `joints` at the stage times. Throws DivergenceError.
UavState step_rk4(const PlantModel& model, const UavState& uav, double t,
                  double dt, const JointTrajectory& joints,
                  const ControlWrench& u, const ExternalWrenchFn& f_ext);

// Generic classical RK4 step for an autonomous-or-not vector field.
template <typename Vector, typename Field>
Vector rk4_step(const Field& f, double t, const Vector& x, double dt) {
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k1));
  const Vector k3 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k2));
  const Vector k4 = f(t + dt, Vector(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace amsim

#endif  // AMSIM_DYNAMICS_HPP_
