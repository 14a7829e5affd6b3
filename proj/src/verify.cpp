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

#include "amsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "amsim/disturbance.hpp"
#include "amsim/inertia.hpp"
#include "amsim/kinematics.hpp"
#include "amsim/scenario.hpp"

namespace amsim {
namespace {

constexpr double kTimeStep = 1e-6;   // s, time-domain central differences
constexpr double kJointStep = 1e-6;  // rad, joint-space central differences

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  Vec3 vec3(double half) {
    return Vec3(uniform(-half, half), uniform(-half, half), uniform(-half, half));
  }
  Vec4 joints(const ArmModel& arm) {
    Vec4 q;
    for (int i = 0; i < 4; ++i) q[i] = uniform(arm.joint_lower[i], arm.joint_upper[i]);
    return q;
  }
  Vec4 vec4(double half) {
    return Vec4(uniform(-half, half), uniform(-half, half), uniform(-half, half),
                uniform(-half, half));
  }
  UavState uav() {
    UavState s;
    s.position = vec3(2.0);
    s.velocity = vec3(1.5);
    s.euler = Vec3(uniform(-0.6, 0.6), uniform(-0.6, 0.6), uniform(-kPi, kPi));
    s.body_rates = vec3(2.0);
    return s;
  }
  ManipulatorState manip(const ArmModel& arm) {
    return {joints(arm), vec4(1.5), vec4(3.0)};
  }

 private:
  std::mt19937_64 rng_;
};

CheckResult check(const std::string& suite, const std::string& name,
                  double measured, double tol) {
  return {suite, name, measured, tol, std::isfinite(measured) && measured < tol};
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Sample times along the piecewise joint program, inside its moving part.
std::vector<double> program_times(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = 10.05 + 29.9 * (i + 0.5) / n;
  return t;
}

void kinematics_suite(const PlantModel& model, const VerifyOptions& opt,
                      std::vector<CheckResult>& out) {
  const ArmModel& arm = model.arm;
  Sampler rng(opt.seed);
  double ortho = 0.0, round_trip = 0.0, jac = 0.0, ang = 0.0, vel = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const Vec4 q = rng.joints(arm);
    const TransformChain chain = chain_transforms(arm, q);
    for (const HomogeneousTransform& t : chain) {
      ortho = std::max(ortho, max_abs(t.rotation.transpose() * t.rotation - Mat3::Identity()));
      ortho = std::max(ortho, std::abs(t.rotation.determinant() - 1.0));
      const HomogeneousTransform id = t * t.inverse();
      round_trip = std::max(round_trip, max_abs(id.matrix() - Mat4::Identity()));
    }
    for (int link = 1; link <= kNumJoints; ++link) {
      const Jacobian j = com_jacobian(arm, q, link);
      for (int c = 0; c < kNumJoints; ++c) {
        Vec4 dq = Vec4::Zero();
        dq[c] = kJointStep;
        const Vec3 fd = (link_com_positions(arm, Vec4(q + dq))[link - 1] -
                         link_com_positions(arm, Vec4(q - dq))[link - 1]) /
                        (2.0 * kJointStep);
        jac = std::max(jac, max_abs(j.block<3, 1>(0, c) - fd));
        const Mat3 rp = chain_transforms(arm, Vec4(q + dq))[link - 1].rotation;
        const Mat3 rm = chain_transforms(arm, Vec4(q - dq))[link - 1].rotation;
        const Mat3 w = (rp - rm) / (2.0 * kJointStep) * chain[link - 1].rotation.transpose();
        const Vec3 w_fd(w(2, 1), w(0, 2), w(1, 0));
        ang = std::max(ang, max_abs(j.block<3, 1>(3, c) - w_fd));
      }
    }
    const Vec4 qd = rng.vec4(1.0);
    const auto v = link_com_velocities(arm, q, qd);
    const Vec3Array p1 = link_com_positions(arm, Vec4(q + kTimeStep * qd));
    const Vec3Array p0 = link_com_positions(arm, Vec4(q - kTimeStep * qd));
    for (int i = 0; i < kNumJoints; ++i) {
      vel = std::max(vel, max_abs(v[i].linear - (p1[i] - p0[i]) / (2.0 * kTimeStep)));
    }
  }
  out.push_back(check("kinematics", "rotation orthonormality", ortho, 1e-10));
  out.push_back(check("kinematics", "transform inverse round trip", round_trip, 1e-12));
  out.push_back(check("kinematics", "CoM Jacobian vs finite difference", jac, 1e-5));
  out.push_back(check("kinematics", "angular Jacobian vs rotation difference", ang, 1e-6));
  out.push_back(check("kinematics", "CoM velocity vs finite difference", vel, 1e-6));
}

void inertia_suite(const PlantModel& model, const VerifyOptions& opt,
                   std::vector<CheckResult>& out) {
  const ArmModel& arm = model.arm;
  const MassBudget mb = model.masses();
  double idot = 0.0, rdot = 0.0, rddot = 0.0, scale = 0.0, sym = 0.0, psd = 0.0;
  for (double t : program_times(opt.samples)) {
    const ManipulatorState m = joint_program_eq21(t);
    const ManipulatorState mp = joint_program_eq21(t + kTimeStep);
    const ManipulatorState mm = joint_program_eq21(t - kTimeStep);
    const Mat3 fd_i = (arm_inertia(arm, mp.q) - arm_inertia(arm, mm.q)) / (2.0 * kTimeStep);
    idot = std::max(idot, max_abs(arm_inertia_rate(arm, m.q, m.qd) - fd_i));
    const Vec3 fd_r = (system_com(arm, mb, mp.q) - system_com(arm, mb, mm.q)) / (2.0 * kTimeStep);
    rdot = std::max(rdot, max_abs(com_rates(arm, mb, m.q, m.qd).first - fd_r));
    const Vec3 fd_a = (com_rates(arm, mb, mp.q, mp.qd).second -
                       com_rates(arm, mb, mm.q, mm.qd).second) / (2.0 * kTimeStep);
    rddot = std::max(rddot, max_abs(arm_com_accel(arm, mb, m) - fd_a));
  }
  Sampler rng(opt.seed + 1);
  for (int s = 0; s < opt.samples; ++s) {
    const ManipulatorState m = rng.manip(arm);
    const InertiaParams ip = compute_inertia_params(arm, mb, m);
    scale = std::max(scale, max_abs(mb.m_man * ip.r_omc - mb.m_s * ip.r_oc));
    sym = std::max(sym, max_abs(ip.I_man_o - ip.I_man_o.transpose()));
    sym = std::max(sym, max_abs(ip.I_man_o_dot - ip.I_man_o_dot.transpose()));
    Eigen::SelfAdjointEigenSolver<Mat3> es(ip.I_man_o);
    psd = std::max(psd, -es.eigenvalues().minCoeff());
  }
  out.push_back(check("inertia", "arm inertia rate vs finite difference", idot, 1e-4));
  out.push_back(check("inertia", "system CoM rate vs finite difference", rdot, 1e-6));
  out.push_back(check("inertia", "arm CoM acceleration vs finite difference", rddot, 1e-4));
  out.push_back(check("inertia", "m_man r_omc = m_s r_oc", scale, 1e-12));
  out.push_back(check("inertia", "inertia symmetry", sym, 1e-12));
  out.push_back(check("inertia", "inertia PSD (negated min eigenvalue)", psd, 1e-15));
}

// Largest relative deviation of central-difference dP/dt from the external
// force along a closed-loop trajectory. Each difference integrates the plant
// ±h from a logged state with the logged control held.
double momentum_theorem_error(const PlantModel& model, double t0, double t1) {
  ScenarioConfig cfg;
  cfg.model = model;
  cfg.controller = ControllerKind::kPidFf;
  cfg.duration = t1;
  cfg.step.enabled = false;
  const TrajectoryLog log = run_scenario(cfg);
  if (log.diverged) return std::numeric_limits<double>::infinity();
  const MassBudget mb = model.masses();
  const double h = 1e-4;
  const ExternalWrenchFn no_ext = [](double) { return Wrench::Zero(); };
  double worst = 0.0;
  for (std::size_t i = 0; i < log.records.size(); i += 25) {
    const LogRecord& r = log.records[i];
    // The arm program switches on at t0 with a jump in joint acceleration, so
    // a central difference there straddles a kink.
    if (r.t <= t0) continue;
    auto momentum_at = [&](double dt) {
      const UavState s = step_rk4(model, r.state, r.t, dt, joint_program_eq21,
                                  r.control, no_ext);
      const ManipulatorState m = joint_program_eq21(r.t + dt);
      return linear_momentum(model, s, compute_inertia_params(model.arm, mb, m));
    };
    const Vec3 dp = (momentum_at(h) - momentum_at(-h)) / (2.0 * h);
    const Vec3 f = external_force(model, r.state, r.control, Wrench::Zero());
    worst = std::max(worst, (dp - f).norm() / (mb.m_s * model.uav.g));
  }
  return worst;
}

double rk4_order_ratio(const PlantModel& model) {
  UavState s0;
  s0.velocity = Vec3(0.3, -0.2, 0.1);
  s0.euler = Vec3(0.05, -0.04, 0.3);
  s0.body_rates = Vec3(0.2, -0.1, 0.05);
  ControlWrench u;
  u.thrust = model.masses().m_s * model.uav.g;
  u.torque = Vec3(0.01, 0.12, -0.005);
  const ExternalWrenchFn no_ext = [](double) { return Wrench::Zero(); };
  auto run = [&](double dt) {
    UavState s = s0;
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < n; ++k) {
      s = step_rk4(model, s, 12.0 + k * dt, dt, joint_program_eq21, u, no_ext);
    }
    return to_state_vector(s);
  };
  const StateVector ref = run(0.02 / 16.0);
  const double e1 = (run(0.02) - ref).norm();
  const double e2 = (run(0.01) - ref).norm();
  return e1 / e2;
}

void dynamics_suite(const PlantModel& model, const VerifyOptions& opt,
                    std::vector<CheckResult>& out) {
  Sampler rng(opt.seed + 2);
  const MassBudget mb = model.masses();
  double resid = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const UavState uav = rng.uav();
    const ManipulatorState m = rng.manip(model.arm);
    const InertiaParams ip = compute_inertia_params(model.arm, mb, m);
    ControlWrench u{rng.uniform(0.0, 60.0), rng.vec3(1.0)};
    Wrench f;
    f.force = rng.vec3(5.0);
    f.torque = rng.vec3(0.5);
    const Accelerations acc = assemble_accelerations(model, uav, ip, u, f);
    resid = std::max(resid, balance_residual(model, uav, ip, u, f, acc).cwiseAbs().maxCoeff());
  }
  out.push_back(check("dynamics", "6x6 solve re-substitution residual", resid, 1e-9));

  PlantModel massless = model;
  for (LinkParams& l : massless.arm.links) {
    l.mass = 0.0;
    l.inertia_com.setZero();
  }
  double quad = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const UavState uav = rng.uav();
    const ManipulatorState m = rng.manip(massless.arm);
    const InertiaParams ip = compute_inertia_params(massless.arm, massless.masses(), m);
    ControlWrench u{rng.uniform(0.0, 60.0), rng.vec3(1.0)};
    const Accelerations acc = assemble_accelerations(massless, uav, ip, u, Wrench::Zero());
    const Vec3& j = massless.uav.J;
    const Vec3& w = uav.body_rates;
    const Vec3 v_dot = -u.thrust / massless.uav.m_b * rotation_from_euler(uav.euler).col(2) +
                       massless.uav.g * Vec3::UnitZ();
    const Vec3 w_dot = (u.torque - w.cross(Vec3(j.cwiseProduct(w)))).cwiseQuotient(j);
    quad = std::max(quad, max_abs(acc.v_dot - v_dot));
    quad = std::max(quad, max_abs(acc.omega_dot - w_dot));
  }
  out.push_back(check("dynamics", "massless arm reduces to rigid multirotor", quad, 1e-12));
  out.push_back(check("dynamics", "momentum theorem along 5 s trajectory (relative)",
                      momentum_theorem_error(model, 10.0, 15.0), 1e-3));
  out.push_back(check("dynamics", "RK4 step-halving ratio |r/16 - 1|",
                      std::abs(rk4_order_ratio(model) / 16.0 - 1.0), 0.3));
}

void disturbance_suite(const PlantModel& model, const VerifyOptions& opt,
                       std::vector<CheckResult>& out) {
  Sampler rng(opt.seed + 3);
  const MassBudget mb = model.masses();
  double force_id = 0.0, torque_id = 0.0, lever = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const UavState uav = rng.uav();
    const ManipulatorState m = rng.manip(model.arm);
    const InertiaParams ip = compute_inertia_params(model.arm, mb, m);
    ControlWrench u{rng.uniform(0.0, 60.0), rng.vec3(1.0)};
    Wrench f;
    f.force = rng.vec3(5.0);
    f.torque = rng.vec3(0.5);
    const Accelerations acc = assemble_accelerations(model, uav, ip, u, f);
    const Wrench dis = coupling_wrench(model, uav, ip, acc);
    const Mat3 r = rotation_from_euler(uav.euler);
    const Vec3 force_rhs = -u.thrust * r.col(2) + mb.m_s * model.uav.g * Vec3::UnitZ() +
                           dis.force + f.force;
    force_id = std::max(force_id, max_abs(mb.m_s * acc.v_dot - force_rhs));
    const Vec3& j = model.uav.J;
    const Vec3& w = uav.body_rates;
    const Vec3 torque_rhs = u.torque - w.cross(Vec3(j.cwiseProduct(w))) + dis.torque + f.torque;
    torque_id = std::max(torque_id, max_abs(Vec3(j.cwiseProduct(acc.omega_dot)) - torque_rhs));

    // Static arm, hovering body: only the gravity lever survives.
    UavState still;
    still.euler = uav.euler;
    ManipulatorState frozen;
    frozen.q = m.q;
    const InertiaParams ips = compute_inertia_params(model.arm, mb, frozen);
    const Vec3 gb = r.transpose() * (model.uav.g * Vec3::UnitZ());
    Vec3 oracle = Vec3::Zero();
    const Vec3Array p = link_com_positions(model.arm, frozen.q);
    for (int i = 0; i < kNumJoints; ++i) {
      oracle += model.arm.links[i].mass * p[i].cross(gb);
    }
    const Vec3 tau = coupling_torque(model, still, ips, Accelerations{});
    lever = std::max(lever, max_abs(tau - oracle));
  }
  out.push_back(check("disturbance", "force identity m_s v_dot = thrust + gravity + F_dis", force_id, 1e-9));
  out.push_back(check("disturbance", "torque identity J w_dot = tau - w x Jw + tau_dis", torque_id, 1e-9));
  out.push_back(check("disturbance", "static arm gravity-lever torque", lever, 1e-12));

  // Periodicity of the hover-state torque along the joint-2 sweep.
  double period_err = 0.0, pitch_peak = 0.0, other_peak = 0.0;
  for (double period : {10.0, 20.0}) {
    for (int i = 0; i < 400; ++i) {
      const double t = period * i / 400.0;
      auto torque_at = [&](double tt) {
        const ManipulatorState m = joint_program_experiment(tt, period);
        const InertiaParams ip = compute_inertia_params(model.arm, mb, m);
        return coupling_torque(model, UavState{}, ip, Accelerations{});
      };
      const Vec3 a = torque_at(t);
      period_err = std::max(period_err, max_abs(a - torque_at(t + period)));
      pitch_peak = std::max(pitch_peak, std::abs(a.y()));
      other_peak = std::max({other_peak, std::abs(a.x()), std::abs(a.z())});
    }
  }
  out.push_back(check("disturbance", "sweep torque periodic in the joint period", period_err, 1e-9));
  out.push_back(check("disturbance", "sweep torque roll/yaw peak over pitch peak",
                      other_peak / pitch_peak, 1.0));

  // Estimated vs truth coupling wrench in closed loop.
  ScenarioConfig cfg;
  cfg.model = model;
  cfg.controller = ControllerKind::kPidFf;
  cfg.step.enabled = false;
  const TrajectoryLog log = run_scenario(cfg);
  double num = 0.0, den = 0.0;
  if (opt.disturbance_csv) {
    *opt.disturbance_csv
        << "t[s],fdis_x[N],fdis_y[N],fdis_z[N],taudis_x[N*m],taudis_y[N*m],taudis_z[N*m],"
           "ff_fdis_x[N],ff_fdis_y[N],ff_fdis_z[N],ff_taudis_x[N*m],ff_taudis_y[N*m],"
           "ff_taudis_z[N*m]\n";
  }
  char buf[32];
  for (const LogRecord& r : log.records) {
    if (opt.disturbance_csv) {
      std::ostream& os = *opt.disturbance_csv;
      std::snprintf(buf, sizeof(buf), "%.9e", r.t);
      os << buf;
      for (const Vec3* v : {&r.truth.force, &r.truth.torque, &r.feedforward.force,
                            &r.feedforward.torque}) {
        for (int i = 0; i < 3; ++i) {
          std::snprintf(buf, sizeof(buf), ",%.9e", (*v)[i]);
          os << buf;
        }
      }
      os << '\n';
    }
    if (r.t < 10.0) continue;
    num += (r.feedforward.force - r.truth.force).squaredNorm() +
           (r.feedforward.torque - r.truth.torque).squaredNorm();
    den += r.truth.force.squaredNorm() + r.truth.torque.squaredNorm();
  }
  const double rel = log.diverged || den == 0.0 ? std::numeric_limits<double>::infinity()
                                                : std::sqrt(num / den);
  out.push_back(check("disturbance", "estimated vs truth wrench relative RMS", rel, 0.02));
}

}  // namespace

bool is_known_suite(const std::string& suite) {
  return suite == "kinematics" || suite == "inertia" || suite == "dynamics" ||
         suite == "disturbance" || suite == "all";
}

std::vector<CheckResult> run_verify(const std::string& suite,
                                    const PlantModel& model,
                                    const VerifyOptions& options) {
  if (!is_known_suite(suite)) {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "kinematics") kinematics_suite(model, options, out);
  if (all || suite == "inertia") inertia_suite(model, options, out);
  if (all || suite == "dynamics") dynamics_suite(model, options, out);
  if (all || suite == "disturbance") disturbance_suite(model, options, out);
  return out;
}

void print_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  char buf[256];
  for (const CheckResult& c : checks) {
    std::snprintf(buf, sizeof(buf), "[%s] %-12s %-55s measured %.3e  tol %.1e\n",
                  c.pass ? "PASS" : "FAIL", c.suite.c_str(), c.name.c_str(),
                  c.measured, c.tolerance);
    out << buf;
  }
}

}  // namespace amsim
