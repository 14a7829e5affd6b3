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

// Configuration-dependent ("variable") inertia of the UAV + arm system, all
// expressed in the UAV body frame with the UAV CoM as origin.

#ifndef AMSIM_INERTIA_HPP_
#define AMSIM_INERTIA_HPP_

#include <utility>

#include "amsim/kinematics.hpp"
#include "amsim/types.hpp"

namespace amsim {

struct MassBudget {
  double m_b = 0.0;    // UAV
  double m_man = 0.0;  // arm, sum of link masses
  double m_s = 0.0;    // m_b + m_man
};

MassBudget make_mass_budget(const ArmModel& arm, double uav_mass);

struct InertiaParams {
  Vec3 r_oc = Vec3::Zero();        // system CoM
  Vec3 r_omc = Vec3::Zero();       // arm CoM
  Vec3 r_oc_dot = Vec3::Zero();
  Vec3 r_omc_dot = Vec3::Zero();
  Vec3 r_omc_ddot = Vec3::Zero();
  Mat3 I_man_o = Mat3::Zero();     // arm inertia about the body origin
  Mat3 I_man_o_dot = Mat3::Zero();
};

// Joint-space step used to difference the CoM Jacobians along q̇.
inline constexpr double kJacobianRateStep = 1e-5;

Vec3 system_com(const ArmModel& arm, const MassBudget& masses, const Vec4& q);

// Returns (ṙ_oc, ṙ_omc).
std::pair<Vec3, Vec3> com_rates(const ArmModel& arm, const MassBudget& masses,
                                const Vec4& q, const Vec4& qd);

// r̈_omc = J q̈ + J̇ q̇, where J̇ q̇ is a central difference of the stacked CoM
// Jacobians along the direction of q̇.
Vec3 arm_com_accel(const ArmModel& arm, const MassBudget& masses,
                   const ManipulatorState& manip);

Mat3 arm_inertia(const ArmModel& arm, const Vec4& q);
Mat3 arm_inertia_rate(const ArmModel& arm, const Vec4& q, const Vec4& qd);

InertiaParams compute_inertia_params(const ArmModel& arm,
                                     const MassBudget& masses,
                                     const ManipulatorState& manip);

}  // namespace amsim

#endif  // AMSIM_INERTIA_HPP_
