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

#include "amsim/inertia.hpp"

#include <tuple>

namespace amsim {
namespace {

// Σ m_i J_lin,i: maps q̇ to the mass-weighted sum of link CoM velocities.
Eigen::Matrix<double, 3, kNumJoints> weighted_linear_jacobian(
    const ArmModel& arm, const Vec4& q) {
  const auto jacs = com_jacobians(arm, q);
  Eigen::Matrix<double, 3, kNumJoints> sum =
      Eigen::Matrix<double, 3, kNumJoints>::Zero();
  for (int i = 0; i < kNumJoints; ++i) {
    sum += arm.links[i].mass * jacs[i].topRows<3>();
  }
  return sum;
}

Vec3 weighted_com_sum(const ArmModel& arm, const Vec3Array& p) {
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < kNumJoints; ++i) sum += arm.links[i].mass * p[i];
  return sum;
}

Mat3 point_mass_inertia(double m, const Vec3& p) {
  return m * (p.squaredNorm() * Mat3::Identity() - p * p.transpose());
}

// 1/m, or 0 for a massless arm so that r_omc-type quantities vanish.
double safe_inverse(double m) { return m > 0.0 ? 1.0 / m : 0.0; }

}  // namespace

MassBudget make_mass_budget(const ArmModel& arm, double uav_mass) {
  MassBudget mb;
  mb.m_b = uav_mass;
  mb.m_man = arm.total_mass();
  mb.m_s = mb.m_b + mb.m_man;
  return mb;
}

Vec3 system_com(const ArmModel& arm, const MassBudget& masses, const Vec4& q) {
  return weighted_com_sum(arm, link_com_positions(arm, q)) / masses.m_s;
}

std::pair<Vec3, Vec3> com_rates(const ArmModel& arm, const MassBudget& masses,
                                const Vec4& q, const Vec4& qd) {
  const Vec3 weighted = weighted_linear_jacobian(arm, q) * qd;
  return {weighted / masses.m_s, weighted * safe_inverse(masses.m_man)};
}

Vec3 arm_com_accel(const ArmModel& arm, const MassBudget& masses,
                   const ManipulatorState& manip) {
  Vec3 weighted = weighted_linear_jacobian(arm, manip.q) * manip.qdd;
  const double speed = manip.qd.norm();
  if (speed > 0.0) {
    const Vec4 dir = manip.qd / speed;
    const double h = kJacobianRateStep;
    const auto jp = weighted_linear_jacobian(arm, manip.q + h * dir);
    const auto jm = weighted_linear_jacobian(arm, manip.q - h * dir);
    weighted += (jp - jm) / (2.0 * h) * speed * manip.qd;
  }
  return weighted * safe_inverse(masses.m_man);
}

Mat3 arm_inertia(const ArmModel& arm, const Vec4& q) {
  const TransformChain chain = chain_transforms(arm, q);
  const Vec3Array p = link_com_positions(arm, chain);
  Mat3 inertia = Mat3::Zero();
  for (int i = 0; i < kNumJoints; ++i) {
    const Mat3& r = chain[i].rotation;
    inertia += r * arm.links[i].inertia_com * r.transpose() +
               point_mass_inertia(arm.links[i].mass, p[i]);
  }
  return inertia;
}

Mat3 arm_inertia_rate(const ArmModel& arm, const Vec4& q, const Vec4& qd) {
  const TransformChain chain = chain_transforms(arm, q);
  const Vec3Array p = link_com_positions(arm, chain);
  Mat3 rate = Mat3::Zero();
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Matrix<double, 6, 1> twist = com_jacobian(chain, p, i + 1) * qd;
    const Vec3 v = twist.head<3>();
    const Mat3 w = skew(twist.tail<3>());
    const Mat3& r = chain[i].rotation;
    const Mat3 rotated = r * arm.links[i].inertia_com * r.transpose();
    const double m = arm.links[i].mass;
    rate += w * rotated - rotated * w;
    rate += m * (2.0 * p[i].dot(v) * Mat3::Identity() - v * p[i].transpose() -
                 p[i] * v.transpose());
  }
  return rate;
}

InertiaParams compute_inertia_params(const ArmModel& arm,
                                     const MassBudget& masses,
                                     const ManipulatorState& manip) {
  InertiaParams ip;
  const Vec3 weighted =
      weighted_com_sum(arm, link_com_positions(arm, manip.q));
  ip.r_oc = weighted / masses.m_s;
  ip.r_omc = weighted * safe_inverse(masses.m_man);
  std::tie(ip.r_oc_dot, ip.r_omc_dot) = com_rates(arm, masses, manip.q, manip.qd);
  ip.r_omc_ddot = arm_com_accel(arm, masses, manip);
  ip.I_man_o = arm_inertia(arm, manip.q);
  ip.I_man_o_dot = arm_inertia_rate(arm, manip.q, manip.qd);
  return ip;
}

}  // namespace amsim
