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

#include "amsim/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace amsim {
namespace {

constexpr double kMinRcond = 1e-12;

const Vec3 kE3 = Vec3::UnitZ();

Mat3 total_inertia(const PlantModel& model, const InertiaParams& ip) {
  return Mat3(model.uav.J.asDiagonal()) + ip.I_man_o;
}

}  // namespace

bool UavState::finite() const {
  return position.allFinite() && velocity.allFinite() && euler.allFinite() &&
         body_rates.allFinite();
}

Mat3 rotation_from_euler(const Vec3& euler) {
  const double sphi = std::sin(euler.x()), cphi = std::cos(euler.x());
  const double sth = std::sin(euler.y()), cth = std::cos(euler.y());
  const double spsi = std::sin(euler.z()), cpsi = std::cos(euler.z());
  Mat3 r;
  r << cpsi * cth, -spsi * cphi + cpsi * sth * sphi, spsi * sphi + cpsi * sth * cphi,
       spsi * cth, cpsi * cphi + spsi * sth * sphi, -cpsi * sphi + spsi * sth * cphi,
       -sth, cth * sphi, cth * cphi;
  return r;
}

// Unknowns x = [v̇; ω̇]. Force balance:
//   m_s v̇ - m_man R [r_omc]x ω̇ = -F R e3 + m_s g e3 + f
//       - m_man R (ω x (ω x r_omc) + 2 ω x ṙ_omc + r̈_omc)
// Torque balance (body frame, ᴮṙ_o = Rᵀ v, ᴮr̈_o = Rᵀ v̇):
//   I ω̇ + m_s [r_oc]x Rᵀ v̇ = τ - ω x (I ω) + m_s (r_oc x Rᵀ g e3 - ṙ_oc x ᴮṙ_o)
//       - m_man (ᴮṙ_o x (ω x r_omc) + ᴮṙ_o x ṙ_omc + ω x (r_omc x ṙ_omc)
//                + r_omc x r̈_omc) - İ ω + τ_ext
Accelerations assemble_accelerations(const PlantModel& model,
                                     const UavState& uav,
                                     const InertiaParams& ip,
                                     const ControlWrench& u,
                                     const Wrench& f_ext) {
  const MassBudget mb = model.masses();
  const double g = model.uav.g;
  const Mat3 r = rotation_from_euler(uav.euler);
  const Mat3 rt = r.transpose();
  const Vec3& w = uav.body_rates;
  const Vec3 vb = rt * uav.velocity;
  const Mat3 inertia = total_inertia(model, ip);

  Eigen::Matrix<double, 6, 6> a;
  a.topLeftCorner<3, 3>() = mb.m_s * Mat3::Identity();
  a.topRightCorner<3, 3>() = -mb.m_man * r * skew(ip.r_omc);
  a.bottomLeftCorner<3, 3>() = mb.m_s * skew(ip.r_oc) * rt;
  a.bottomRightCorner<3, 3>() = inertia;

  Vec6 b;
  b.head<3>() = -u.thrust * r * kE3 + mb.m_s * g * kE3 + f_ext.force -
                mb.m_man * r *
                    (w.cross(w.cross(ip.r_omc)) + 2.0 * w.cross(ip.r_omc_dot) +
                     ip.r_omc_ddot);
  b.tail<3>() = u.torque - w.cross(inertia * w) +
                mb.m_s * (ip.r_oc.cross(rt * (g * kE3)) - ip.r_oc_dot.cross(vb)) -
                mb.m_man * (vb.cross(w.cross(ip.r_omc)) + vb.cross(ip.r_omc_dot) +
                            w.cross(ip.r_omc.cross(ip.r_omc_dot)) +
                            ip.r_omc.cross(ip.r_omc_ddot)) -
                ip.I_man_o_dot * w + f_ext.torque;

  const Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond)) {
    std::ostringstream msg;
    msg << "assemble_accelerations: singular coupling matrix (rcond=" << rcond
        << ")";
    throw SingularSystemError(msg.str(), rcond);
  }
  const Vec6 x = lu.solve(b);
  return {x.head<3>(), x.tail<3>()};
}

Vec6 balance_residual(const PlantModel& model, const UavState& uav,
                      const InertiaParams& ip, const ControlWrench& u,
                      const Wrench& f_ext, const Accelerations& acc) {
  const MassBudget mb = model.masses();
  const double g = model.uav.g;
  const Mat3 r = rotation_from_euler(uav.euler);
  const Mat3 rt = r.transpose();
  const Vec3& w = uav.body_rates;
  const Vec3& wd = acc.omega_dot;
  const Vec3 vb = rt * uav.velocity;  // ᴮṙ_o
  const Vec3 ab = rt * acc.v_dot;     // ᴮr̈_o
  const Mat3 inertia = total_inertia(model, ip);

  // v̇ = -(F/m_s) R e3 - (m_man/m_s) R (...) + g e3 + f/m_s
  const Vec3 v_dot_rhs =
      -(u.thrust / mb.m_s) * (r * kE3) -
      (mb.m_man / mb.m_s) * r *
          (w.cross(w.cross(ip.r_omc)) + wd.cross(ip.r_omc) +
           2.0 * w.cross(ip.r_omc_dot) + ip.r_omc_ddot) +
      g * kE3 + f_ext.force / mb.m_s;

  const Vec3 gravity_lever = ip.r_oc.cross(rt * (g * kE3));
  const Vec3 torque_rhs =
      u.torque - w.cross(inertia * w) +
      mb.m_s * (gravity_lever - ip.r_oc.cross(ab) - ip.r_oc_dot.cross(vb)) -
      mb.m_man * (vb.cross(w.cross(ip.r_omc)) + vb.cross(ip.r_omc_dot) +
                  w.cross(ip.r_omc.cross(ip.r_omc_dot)) +
                  ip.r_omc.cross(ip.r_omc_ddot)) -
      ip.I_man_o_dot * w + f_ext.torque;

  Vec6 res;
  res.head<3>() = acc.v_dot - v_dot_rhs;
  res.tail<3>() = inertia * wd - torque_rhs;
  return res;
}

Vec3 linear_momentum(const PlantModel& model, const UavState& uav,
                     const InertiaParams& ip) {
  const MassBudget mb = model.masses();
  const Mat3 r = rotation_from_euler(uav.euler);
  return mb.m_s * uav.velocity +
         mb.m_man * r * (uav.body_rates.cross(ip.r_omc) + ip.r_omc_dot);
}

Vec3 external_force(const PlantModel& model, const UavState& uav,
                    const ControlWrench& u, const Wrench& f_ext) {
  const MassBudget mb = model.masses();
  return -u.thrust * rotation_from_euler(uav.euler) * kE3 +
         mb.m_s * model.uav.g * kE3 + f_ext.force;
}

Vec3 euler_rates(const PlantModel& model, const UavState& uav) {
  if (model.attitude_kinematics == AttitudeKinematics::kBodyRatesAsEulerRates) {
    return uav.body_rates;
  }
  const double sphi = std::sin(uav.euler.x()), cphi = std::cos(uav.euler.x());
  const double tth = std::tan(uav.euler.y()), cth = std::cos(uav.euler.y());
  Mat3 e;
  e << 1.0, sphi * tth, cphi * tth,
       0.0, cphi, -sphi,
       0.0, sphi / cth, cphi / cth;
  return e * uav.body_rates;
}

StateVector to_state_vector(const UavState& s) {
  StateVector x;
  for (int i = 0; i < 3; ++i) {
    x[2 * i] = s.position[i];
    x[2 * i + 1] = s.velocity[i];
    x[6 + 2 * i] = s.euler[i];
    x[6 + 2 * i + 1] = s.body_rates[i];
  }
  return x;
}

UavState from_state_vector(const StateVector& x) {
  UavState s;
  for (int i = 0; i < 3; ++i) {
    s.position[i] = x[2 * i];
    s.velocity[i] = x[2 * i + 1];
    s.euler[i] = x[6 + 2 * i];
    s.body_rates[i] = x[6 + 2 * i + 1];
  }
  return s;
}

StateVector state_derivative(const PlantModel& model, const UavState& uav,
                             const ManipulatorState& manip,
                             const ControlWrench& u, const Wrench& f_ext) {
  if (!(std::abs(uav.euler.y()) < kPitchLimit)) {
    std::ostringstream msg;
    msg << "state_derivative: pitch " << uav.euler.y()
        << " rad outside the Euler-angle domain";
    throw DomainError(msg.str());
  }
  const InertiaParams ip = compute_inertia_params(model.arm, model.masses(), manip);
  const Accelerations acc = assemble_accelerations(model, uav, ip, u, f_ext);
  const Vec3 rates = euler_rates(model, uav);
  StateVector xd;
  for (int i = 0; i < 3; ++i) {
    xd[2 * i] = uav.velocity[i];
    xd[2 * i + 1] = acc.v_dot[i];
    xd[6 + 2 * i] = rates[i];
    xd[6 + 2 * i + 1] = acc.omega_dot[i];
  }
  return xd;
}

UavState step_rk4(const PlantModel& model, const UavState& uav, double t,
                  double dt, const JointTrajectory& joints,
                  const ControlWrench& u, const ExternalWrenchFn& f_ext) {
  const auto field = [&](double tau, const StateVector& x) -> StateVector {
    const Wrench ext = f_ext ? f_ext(tau) : Wrench::Zero();
    return state_derivative(model, from_state_vector(x), joints(tau), u, ext);
  };
  StateVector next;
  try {
    next = rk4_step(field, t, to_state_vector(uav), dt);
  } catch (const DomainError& e) {
    throw DivergenceError(e.what(), t);
  }
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "step_rk4: non-finite state at t=" << t + dt;
    throw DivergenceError(msg.str(), t + dt);
  }
  return from_state_vector(next);
}

}  // namespace amsim
