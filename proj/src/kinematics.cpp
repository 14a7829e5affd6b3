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

#include "amsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace amsim {

Mat4 HomogeneousTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

double ArmModel::total_mass() const {
  double m = 0.0;
  for (const auto& link : links) m += link.mass;
  return m;
}

double ArmModel::reach_bound() const {
  double r = mount.translation.norm();
  double com_max = 0.0;
  for (int i = 0; i < kNumJoints; ++i) {
    r += std::abs(dh[i].a_prev) + std::abs(dh[i].d);
    com_max = std::max(com_max, links[i].com.norm());
  }
  return r + com_max;
}

ArmModel canonical_arm() {
  ArmModel arm;
  arm.dh[0] = {0.0, 0.012, 0.0935, 0.0};
  arm.dh[1] = {-kPi / 2.0, 0.0, 0.0, -1.3855};
  arm.dh[2] = {0.0, 0.13023, 0.0, 1.3855};
  arm.dh[3] = {0.0, 0.124, 0.0, 0.0};

  arm.links[0].mass = 0.238;
  arm.links[0].com = Vec3(-0.006794, 0.000253, -0.048813);
  arm.links[0].inertia_com << 2.90202, 0.00335, 0.32543,
                              0.00335, 3.24158, 0.02059,
                              0.32543, 0.02059, 1.41275;

  arm.links[1].mass = 0.123;
  arm.links[1].com = Vec3(0.107084, -0.010616, 0.000467);
  arm.links[1].inertia_com << 0.33028, -0.06189, 0.01212,
                              -0.06189, 1.84812, -0.0002,
                              0.01212, -0.0002, 1.89169;

  arm.links[2].mass = 0.118;
  arm.links[2].com = Vec3(0.094329, 0.0, 0.000489);
  arm.links[2].inertia_com << 0.20796, 0.00002, 0.01064,
                              0.00002, 1.45545, 0.0,
                              0.01064, 0.0, 1.38574;

  arm.links[3].mass = 0.224;
  arm.links[3].com = Vec3(0.060527, -0.006058, -0.000021);
  arm.links[3].inertia_com << 1.43765, 0.21123, 0.00001,
                              0.21123, 2.12697, 0.00485,
                              0.00001, 0.00485, 1.80588;

  for (auto& link : arm.links) link.inertia_com *= 1e-4;
  return arm;
}

HomogeneousTransform dh_transform(const DhRow& row, double q) {
  const double theta = q + row.theta_offset;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha_prev), sa = std::sin(row.alpha_prev);
  HomogeneousTransform t;
  t.rotation << ct, -st, 0.0,
                st * ca, ct * ca, -sa,
                st * sa, ct * sa, ca;
  t.translation << row.a_prev, -sa * row.d, ca * row.d;
  return t;
}

TransformChain chain_transforms(const ArmModel& arm, const Vec4& q) {
  TransformChain chain;
  HomogeneousTransform acc = arm.mount;
  for (int i = 0; i < kNumJoints; ++i) {
    acc = acc * dh_transform(arm.dh[i], q[i]);
    chain[i] = acc;
  }
  return chain;
}

Vec3Array link_com_positions(const ArmModel& arm, const TransformChain& chain) {
  Vec3Array p;
  for (int i = 0; i < kNumJoints; ++i) p[i] = chain[i].apply(arm.links[i].com);
  return p;
}

Vec3Array link_com_positions(const ArmModel& arm, const Vec4& q) {
  return link_com_positions(arm, chain_transforms(arm, q));
}

Jacobian com_jacobian(const TransformChain& chain,
                      const Vec3Array& com_positions, int link) {
  if (link < 1 || link > kNumJoints) {
    throw std::out_of_range("com_jacobian: link index " + std::to_string(link) +
                            " outside [1, 4]");
  }
  Jacobian jac = Jacobian::Zero();
  const Vec3& p = com_positions[link - 1];
  for (int j = 0; j < link; ++j) {
    // Joint j+1 rotates about z of frame j+1.
    const Vec3 axis = chain[j].rotation.col(2);
    jac.block<3, 1>(0, j) = axis.cross(p - chain[j].translation);
    jac.block<3, 1>(3, j) = axis;
  }
  return jac;
}

Jacobian com_jacobian(const ArmModel& arm, const Vec4& q, int link) {
  const TransformChain chain = chain_transforms(arm, q);
  return com_jacobian(chain, link_com_positions(arm, chain), link);
}

std::array<Jacobian, kNumJoints> com_jacobians(const ArmModel& arm,
                                               const Vec4& q) {
  const TransformChain chain = chain_transforms(arm, q);
  const Vec3Array p = link_com_positions(arm, chain);
  std::array<Jacobian, kNumJoints> out;
  for (int i = 0; i < kNumJoints; ++i) out[i] = com_jacobian(chain, p, i + 1);
  return out;
}

std::array<LinkVelocity, kNumJoints> link_com_velocities(const ArmModel& arm,
                                                         const Vec4& q,
                                                         const Vec4& qd) {
  const auto jacs = com_jacobians(arm, q);
  std::array<LinkVelocity, kNumJoints> out;
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Matrix<double, 6, 1> twist = jacs[i] * qd;
    out[i].linear = twist.head<3>();
    out[i].angular = twist.tail<3>();
  }
  return out;
}

}  // namespace amsim
