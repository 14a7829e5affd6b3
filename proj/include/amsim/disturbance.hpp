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

// Coupling disturbance induced on the UAV by the arm: the part of the
// coupled dynamics that a rigid quadrotor model does not contain. With
// (F_dis, τ_dis) the full dynamics read
//
//   m_s v̇ = -u_m R e3 + m_s g e3 + F_dis
//   J ω̇   = τ - ω x (J ω) + τ_dis
//
// F_dis is expressed in the inertial frame, τ_dis in the body frame.

#ifndef AMSIM_DISTURBANCE_HPP_
#define AMSIM_DISTURBANCE_HPP_

#include "amsim/dynamics.hpp"
#include "amsim/inertia.hpp"
#include "amsim/types.hpp"

namespace amsim {

// `acc.omega_dot` is the body angular acceleration used in the ω̇ x r_omc term.
Vec3 coupling_force(const PlantModel& model, const UavState& uav,
                    const InertiaParams& ip, const Accelerations& acc);

// `acc.v_dot` supplies ᴮr̈_o = Rᵀ v̇, `acc.omega_dot` the I_man ω̇ term.
Vec3 coupling_torque(const PlantModel& model, const UavState& uav,
                     const InertiaParams& ip, const Accelerations& acc);

Wrench coupling_wrench(const PlantModel& model, const UavState& uav,
                       const InertiaParams& ip, const Accelerations& acc);

// Controller-side evaluation from measured state, the commanded arm motion,
// and an estimate of the UAV accelerations.
Wrench feedforward_wrench(const PlantModel& model, const UavState& uav,
                          const ManipulatorState& manip,
                          const Accelerations& estimate);

// Causal estimate of (v̇, ω̇): backward difference over the sample period
// followed by a first-order low-pass. The first sample yields zero.
class AccelerationEstimator {
 public:
  explicit AccelerationEstimator(double cutoff_rad_s = 50.0)
      : cutoff_(cutoff_rad_s) {}

  const Accelerations& update(const UavState& uav, double dt);
  const Accelerations& estimate() const { return filtered_; }
  void reset();

 private:
  double cutoff_;
  bool primed_ = false;
  Vec3 last_velocity_ = Vec3::Zero();
  Vec3 last_rates_ = Vec3::Zero();
  Accelerations filtered_{};
};

// Discrete first-order low-pass gain for cutoff `wc` (rad/s) and period dt.
double lowpass_alpha(double wc, double dt);

}  // namespace amsim

#endif  // AMSIM_DISTURBANCE_HPP_
