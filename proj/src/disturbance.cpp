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

#include "amsim/disturbance.hpp"

#include <cmath>

namespace amsim {

Vec3 coupling_force(const PlantModel& model, const UavState& uav,
                    const InertiaParams& ip, const Accelerations& acc) {
  const double m_man = model.masses().m_man;
  const Vec3& w = uav.body_rates;
  return -m_man * rotation_from_euler(uav.euler) *
         (w.cross(w.cross(ip.r_omc)) + acc.omega_dot.cross(ip.r_omc) +
          2.0 * w.cross(ip.r_omc_dot) + ip.r_omc_ddot);
}

Vec3 coupling_torque(const PlantModel& model, const UavState& uav,
                     const InertiaParams& ip, const Accelerations& acc) {
  const MassBudget mb = model.masses();
  const Mat3 rt = rotation_from_euler(uav.euler).transpose();
  const Vec3& w = uav.body_rates;
  const Vec3 gb = rt * (model.uav.g * Vec3::UnitZ());  // ᴮR_I g e3
  const Vec3 vb = rt * uav.velocity;                   // ᴮṙ_o
  const Vec3 ab = rt * acc.v_dot;                      // ᴮr̈_o

  const Vec3 system_com_terms =
      ip.r_oc.cross(gb) - ip.r_oc.cross(ab) - ip.r_oc_dot.cross(vb);
  const Vec3 arm_com_terms =
      vb.cross(ip.r_omc_dot) + vb.cross(w.cross(ip.r_omc)) +
      w.cross(ip.r_omc.cross(ip.r_omc_dot)) + ip.r_omc.cross(ip.r_omc_ddot);
  const Vec3 arm_inertia_terms = ip.I_man_o_dot * w +
                                 w.cross(ip.I_man_o * w) +
                                 ip.I_man_o * acc.omega_dot;
  return mb.m_s * system_com_terms - mb.m_man * arm_com_terms -
         arm_inertia_terms;
}

Wrench coupling_wrench(const PlantModel& model, const UavState& uav,
                       const InertiaParams& ip, const Accelerations& acc) {
  Wrench w;
  w.force = coupling_force(model, uav, ip, acc);
  w.torque = coupling_torque(model, uav, ip, acc);
  w.force_frame = Frame::kInertial;
  w.torque_frame = Frame::kBody;
  return w;
}

Wrench feedforward_wrench(const PlantModel& model, const UavState& uav,
                          const ManipulatorState& manip,
                          const Accelerations& estimate) {
  const InertiaParams ip =
      compute_inertia_params(model.arm, model.masses(), manip);
  return coupling_wrench(model, uav, ip, estimate);
}

double lowpass_alpha(double wc, double dt) { return 1.0 - std::exp(-wc * dt); }

const Accelerations& AccelerationEstimator::update(const UavState& uav,
                                                   double dt) {
  if (primed_) {
    const double a = lowpass_alpha(cutoff_, dt);
    const Vec3 raw_v = (uav.velocity - last_velocity_) / dt;
    const Vec3 raw_w = (uav.body_rates - last_rates_) / dt;
    filtered_.v_dot += a * (raw_v - filtered_.v_dot);
    filtered_.omega_dot += a * (raw_w - filtered_.omega_dot);
  }
  primed_ = true;
  last_velocity_ = uav.velocity;
  last_rates_ = uav.body_rates;
  return filtered_;
}

void AccelerationEstimator::reset() {
  primed_ = false;
  last_velocity_.setZero();
  last_rates_.setZero();
  filtered_ = {};
}

}  // namespace amsim
