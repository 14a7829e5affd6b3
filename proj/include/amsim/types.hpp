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

#ifndef AMSIM_TYPES_HPP_
#define AMSIM_TYPES_HPP_

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace amsim {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr int kNumJoints = 4;

// Cross-product matrix: skew(a) * b == a.cross(b).
inline Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return s;
}

enum class Frame { kInertial, kBody };

// Force/torque pair with explicit frame tags. Coupling forces live in the
// inertial frame while coupling torques live in the body frame, so the tags
// are carried with the values.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Frame force_frame = Frame::kInertial;
  Frame torque_frame = Frame::kBody;

  static Wrench Zero() { return {}; }
};

// Joint-space state of the manipulator (q, q̇, q̈).
struct ManipulatorState {
  Vec4 q = Vec4::Zero();
  Vec4 qd = Vec4::Zero();
  Vec4 qdd = Vec4::Zero();
};

// Raised when a model input leaves the domain where it is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amsim

#endif  // AMSIM_TYPES_HPP_
