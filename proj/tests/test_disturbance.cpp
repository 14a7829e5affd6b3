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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "amsim/disturbance.hpp"
#include "amsim/scenario.hpp"
#include "oracles.hpp"

namespace amsim {
namespace {

UavState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> v(-1.0, 1.0), a(-0.4, 0.4), w(-1.5, 1.5);
  UavState s;
  s.velocity = Vec3(v(rng), v(rng), v(rng));
  s.euler = Vec3(a(rng), a(rng), a(rng));
  s.body_rates = Vec3(w(rng), w(rng), w(rng));
  return s;
}

TEST(CouplingForce, VanishesAtRest) {
  const PlantModel model;
  ManipulatorState m;
  m.q = Vec4(0.3, 0.2, -1.0, 0.4);
  const InertiaParams ip = compute_inertia_params(model.arm, model.masses(), m);
  EXPECT_EQ(coupling_force(model, UavState{}, ip, Accelerations{}), Vec3::Zero());
}

TEST(CouplingForce, ArmAccelerationOnly) {
  const PlantModel model;
  const MassBudget mb = model.masses();
  ManipulatorState m;
  m.q = Vec4(0.3, 0.2, -1.0, 0.4);
  m.qdd = Vec4(1.0, -0.5, 0.2, 0.0);
  const InertiaParams ip = compute_inertia_params(model.arm, mb, m);
  UavState s;
  s.euler = Vec3(0.1, -0.2, 0.4);
  const Vec3 expected = -mb.m_man * oracle::euler_zyx(0.1, -0.2, 0.4) * ip.r_omc_ddot;
  EXPECT_LT((coupling_force(model, s, ip, Accelerations{}) - expected).norm(), 1e-15);
}

TEST(CouplingTorque, GravityLeverMatchesPointMassSum) {
  const PlantModel model;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-kPi, kPi), a(-0.3, 0.3);
  for (int n = 0; n < 50; ++n) {
    ManipulatorState m;
    m.q = Vec4(d(rng), d(rng), d(rng), d(rng));
    UavState s;
    s.euler = Vec3(a(rng), a(rng), a(rng));
    const InertiaParams ip = compute_inertia_params(model.arm, model.masses(), m);
    const Mat3 r = oracle::euler_zyx(s.euler.x(), s.euler.y(), s.euler.z());
    const Vec3 g_body = r.transpose() * Vec3(0.0, 0.0, model.uav.g);
    const Vec3 expected = oracle::point_mass_gravity_torque(m.q, g_body);
    EXPECT_LT((coupling_torque(model, s, ip, Accelerations{}) - expected).norm(), 1e-13);
  }
}

TEST(CouplingTorque, VanishesWithCentredArmAtRest) {
  PlantModel model;
  for (auto& row : model.arm.dh) row = DhRow{};
  for (auto& l : model.arm.links) l.com = Vec3::Zero();
  const InertiaParams ip = compute_inertia_params(model.arm, model.masses(), ManipulatorState{});
  EXPECT_LT(coupling_torque(model, UavState{}, ip, Accelerations{}).norm(), 1e-18);
  EXPECT_LT(feedforward_wrench(model, UavState{}, ManipulatorState{}, Accelerations{}).torque.norm(),
            1e-18);
}

TEST(CouplingWrench, ResubstitutesIntoDynamics) {
  const PlantModel model;
  const MassBudget mb = model.masses();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(10.0, 40.0), f(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const UavState s = random_state(rng);
    const InertiaParams ip = compute_inertia_params(model.arm, mb, joint_program_eq21(t(rng)));
    ControlWrench u;
    u.thrust = mb.m_s * model.uav.g + 3.0 * f(rng);
    u.torque = 0.1 * Vec3(f(rng), f(rng), f(rng));
    const Accelerations acc = assemble_accelerations(model, s, ip, u, Wrench::Zero());
    const Wrench w = coupling_wrench(model, s, ip, acc);
    EXPECT_EQ(w.force_frame, Frame::kInertial);
    EXPECT_EQ(w.torque_frame, Frame::kBody);
    const Mat3 r = rotation_from_euler(s.euler);
    const Vec3 force_rhs = -u.thrust * r * Vec3::UnitZ() + mb.m_s * model.uav.g * Vec3::UnitZ() + w.force;
    EXPECT_LT((mb.m_s * acc.v_dot - force_rhs).cwiseAbs().maxCoeff(), 1e-9);
    const Vec3 J = model.uav.J;
    const Vec3& om = s.body_rates;
    const Vec3 torque_rhs = u.torque - om.cross(J.cwiseProduct(om)) + w.torque;
    EXPECT_LT((J.cwiseProduct(acc.omega_dot) - torque_rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(CouplingWrench, MasslessArmVanishes) {
  PlantModel model;
  for (auto& l : model.arm.links) {
    l.mass = 1e-14;
    l.inertia_com.setZero();
  }
  const MassBudget mb = model.masses();
  std::mt19937_64 rng(3);
  const UavState s = random_state(rng);
  const InertiaParams ip = compute_inertia_params(model.arm, mb, joint_program_eq21(14.0));
  Accelerations acc;
  acc.v_dot = Vec3(0.2, 0.1, -0.3);
  acc.omega_dot = Vec3(1.0, -2.0, 0.5);
  const Wrench w = coupling_wrench(model, s, ip, acc);
  EXPECT_LT(w.force.norm(), 1e-12);
  EXPECT_LT(w.torque.norm(), 1e-12);
}

TEST(FeedforwardWrench, EqualsTruthWithTrueAccelerations) {
  const PlantModel model;
  std::mt19937_64 rng(4);
  const UavState s = random_state(rng);
  const ManipulatorState m = joint_program_eq21(21.3);
  const InertiaParams ip = compute_inertia_params(model.arm, model.masses(), m);
  ControlWrench u;
  u.thrust = 33.0;
  u.torque = Vec3(0.02, -0.1, 0.01);
  const Accelerations acc = assemble_accelerations(model, s, ip, u, Wrench::Zero());
  const Wrench truth = coupling_wrench(model, s, ip, acc);
  const Wrench ff = feedforward_wrench(model, s, m, acc);
  EXPECT_EQ(ff.force, truth.force);
  EXPECT_EQ(ff.torque, truth.torque);
}

TEST(ExperimentSweep, TorqueIsPeriodicAndPitchDominated) {
  const PlantModel model;
  const MassBudget mb = model.masses();
  UavState s;
  for (double period : {10.0, 20.0}) {
    double peak[3] = {0, 0, 0};
    for (double t = 0.0; t < 2.0 * period; t += 0.01) {
      const ManipulatorState a = joint_program_experiment(t, period);
      const ManipulatorState b = joint_program_experiment(t + period, period);
      const Vec3 ta = coupling_torque(model, s, compute_inertia_params(model.arm, mb, a), Accelerations{});
      const Vec3 tb = coupling_torque(model, s, compute_inertia_params(model.arm, mb, b), Accelerations{});
      EXPECT_LT((ta - tb).norm(), 1e-9);
      for (int i = 0; i < 3; ++i) peak[i] = std::max(peak[i], std::abs(ta[i]));
    }
    EXPECT_GT(peak[1], peak[0]);
    EXPECT_GT(peak[1], peak[2]);
  }
}

TEST(AccelerationEstimator, FirstSampleZeroThenFilteredDifference) {
  AccelerationEstimator est(50.0);
  UavState s;
  EXPECT_EQ(est.update(s, 0.002).v_dot, Vec3::Zero());
  s.velocity = Vec3(0.002, 0.0, 0.0);  // 1 m/s^2 over one period
  const double a = lowpass_alpha(50.0, 0.002);
  EXPECT_NEAR(est.update(s, 0.002).v_dot.x(), a * 1.0, 1e-12);
  EXPECT_NEAR(a, 1.0 - std::exp(-50.0 * 0.002), 1e-15);
}

TEST(AccelerationEstimator, ConvergesOnConstantAcceleration) {
  AccelerationEstimator est(50.0);
  UavState s;
  for (int k = 0; k < 1000; ++k) {
    s.velocity = Vec3(0.5, -0.2, 0.1) * (k * 0.002);
    s.body_rates = Vec3(-1.0, 0.3, 2.0) * (k * 0.002);
    est.update(s, 0.002);
  }
  EXPECT_LT((est.estimate().v_dot - Vec3(0.5, -0.2, 0.1)).norm(), 1e-9);
  EXPECT_LT((est.estimate().omega_dot - Vec3(-1.0, 0.3, 2.0)).norm(), 1e-9);
}

}  // namespace
}  // namespace amsim
