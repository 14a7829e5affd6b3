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

// Forward kinematics of the 4-DOF arm expressed in the UAV body frame.
//
// Link frames follow the modified (Craig) Denavit-Hartenberg convention. The
// transform from frame i-1 to frame i is
//
//   T = RotX(alpha_{i-1}) * TransX(a_{i-1}) * RotZ(theta_i) * TransZ(d_i)
//
//     = [ cθ      -sθ      0     a      ]
//       [ sθ cα    cθ cα  -sα   -sα d   ]
//       [ sθ sα    cθ sα   cα    cα d   ]
//       [ 0        0       0     1      ]
//
// with theta_i = q_i + theta_offset_i.

#ifndef AMSIM_KINEMATICS_HPP_
#define AMSIM_KINEMATICS_HPP_

#include <array>

#include <Eigen/Core>

#include "amsim/types.hpp"

namespace amsim {

struct DhRow {
  double alpha_prev = 0.0;  // rad
  double a_prev = 0.0;      // m
  double d = 0.0;           // m
  double theta_offset = 0.0;  // rad
};

struct LinkParams {
  double mass = 0.0;            // kg
  Vec3 com = Vec3::Zero();      // m, link frame
  Mat3 inertia_com = Mat3::Zero();  // kg m^2 about the link CoM, link frame
};

struct HomogeneousTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static HomogeneousTransform Identity() { return {}; }

  HomogeneousTransform operator*(const HomogeneousTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  HomogeneousTransform inverse() const {
    const Mat3 rt = rotation.transpose();
    return {rt, -rt * translation};
  }
  Mat4 matrix() const;
};

using Jacobian = Eigen::Matrix<double, 6, kNumJoints>;
using TransformChain = std::array<HomogeneousTransform, kNumJoints>;
using Vec3Array = std::array<Vec3, kNumJoints>;

// Geometry and mass properties of the arm plus its mounting pose under the
// UAV. Joint limits are only used for sampling in tests and verification.
struct ArmModel {
  std::array<DhRow, kNumJoints> dh{};
  std::array<LinkParams, kNumJoints> links{};
  HomogeneousTransform mount = HomogeneousTransform::Identity();
  Vec4 joint_lower = Vec4::Constant(-kPi);
  Vec4 joint_upper = Vec4::Constant(kPi);

  double total_mass() const;
  // Upper bound on |p| for any point rigidly attached to the arm.
  double reach_bound() const;
};

// OpenMANIPULATOR-X parameters used by the reference platform.
ArmModel canonical_arm();

HomogeneousTransform dh_transform(const DhRow& row, double q);

// Body-frame pose of each link frame: mount * T1 * ... * Ti.
TransformChain chain_transforms(const ArmModel& arm, const Vec4& q);

Vec3Array link_com_positions(const ArmModel& arm, const Vec4& q);
Vec3Array link_com_positions(const ArmModel& arm, const TransformChain& chain);

// Stacked [linear; angular] Jacobian of link `link` (1-based) CoM in the body
// frame. Columns of joints beyond the link are zero. Throws std::out_of_range.
Jacobian com_jacobian(const ArmModel& arm, const Vec4& q, int link);
Jacobian com_jacobian(const TransformChain& chain,
                      const Vec3Array& com_positions, int link);
std::array<Jacobian, kNumJoints> com_jacobians(const ArmModel& arm,
                                               const Vec4& q);

struct LinkVelocity {
  Vec3 linear = Vec3::Zero();   // ᴮv_ci
  Vec3 angular = Vec3::Zero();  // ᴮω_i
};

std::array<LinkVelocity, kNumJoints> link_com_velocities(const ArmModel& arm,
                                                         const Vec4& q,
                                                         const Vec4& qd);

}  // namespace amsim

#endif  // AMSIM_KINEMATICS_HPP_
