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

#include "amsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "amsim/disturbance.hpp"
#include "amsim/inertia.hpp"

namespace amsim {

ManipulatorState joint_program_eq21(double t) {
  ManipulatorState m;
  m.q[2] = -kPi / 2.0;
  if (t < 10.0) return m;
  const double tau = t - 10.0;
  const double a = kPi / 3.0;
  const double w1 = kPi / 10.0;
  const double w2 = 2.0 * kPi / 15.0;
  m.q[0] = a * std::sin(w1 * tau);
  m.qd[0] = a * w1 * std::cos(w1 * tau);
  m.qdd[0] = -a * w1 * w1 * std::sin(w1 * tau);
  m.q[1] = a * std::sin(w2 * tau);
  m.qd[1] = a * w2 * std::cos(w2 * tau);
  m.qdd[1] = -a * w2 * w2 * std::sin(w2 * tau);
  return m;
}

ManipulatorState joint_program_experiment(double t, double period,
                                          double amplitude, const Vec4& pose) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("joint_program_experiment: period must be positive");
  }
  ManipulatorState m;
  m.q = pose;
  const double w = 2.0 * kPi / period;
  m.q[1] = amplitude * std::sin(w * t);
  m.qd[1] = amplitude * w * std::cos(w * t);
  m.qdd[1] = -amplitude * w * w * std::sin(w * t);
  return m;
}

JointSpline::JointSpline(std::vector<double> times, std::vector<Vec4> knots)
    : times_(std::move(times)), knots_(std::move(knots)) {
  const std::size_t n = times_.size();
  if (n < 2 || knots_.size() != n) {
    throw std::invalid_argument("JointSpline: need at least two matching samples");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("JointSpline: times must be strictly increasing");
    }
  }
  // Tridiagonal solve for the knot second derivatives, natural end conditions.
  second_.assign(n, Vec4::Zero());
  std::vector<double> c(n, 0.0);
  std::vector<Vec4> d(n, Vec4::Zero());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = times_[i] - times_[i - 1];
    const double h1 = times_[i + 1] - times_[i];
    const Vec4 rhs = 6.0 * ((knots_[i + 1] - knots_[i]) / h1 -
                            (knots_[i] - knots_[i - 1]) / h0);
    const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    c[i] = h1 / diag;
    d[i] = (rhs - h0 * d[i - 1]) / diag;
  }
  for (std::size_t i = n - 1; i-- > 1;) {
    second_[i] = d[i] - c[i] * second_[i + 1];
  }
}

ManipulatorState JointSpline::operator()(double t) const {
  ManipulatorState m;
  if (times_.empty()) return m;
  if (t <= times_.front()) {
    m.q = knots_.front();
    return m;
  }
  if (t >= times_.back()) {
    m.q = knots_.back();
    return m;
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double h = times_[i + 1] - times_[i];
  const double a = (times_[i + 1] - t) / h;
  const double b = (t - times_[i]) / h;
  const Vec4& y0 = knots_[i];
  const Vec4& y1 = knots_[i + 1];
  const Vec4& m0 = second_[i];
  const Vec4& m1 = second_[i + 1];
  m.q = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h / 6.0);
  m.qd = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * (h / 6.0);
  m.qdd = a * m0 + b * m1;
  return m;
}

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw std::invalid_argument(key + ": " + what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ScenarioConfig::validate() const {
  require(finite_positive(duration), "scenario.duration", "must be > 0");
  require(finite_positive(physics_dt), "scenario.physics_dt", "must be > 0");
  require(finite_positive(control_dt), "scenario.control_dt", "must be > 0");
  const double ratio = control_dt / physics_dt;
  require(ratio >= 1.0 - 1e-9 && std::abs(ratio - std::round(ratio)) < 1e-9,
          "scenario.control_dt", "must be an integer multiple of physics_dt");
  require(std::isfinite(takeoff_time) && takeoff_time >= 0.0,
          "scenario.takeoff_time", "must be >= 0");
  require(takeoff_profile == TakeoffProfile::kStep || finite_positive(takeoff_ramp),
          "scenario.takeoff_ramp", "must be > 0");
  require(std::isfinite(hover_height), "scenario.hover_height", "must be finite");
  require(std::isfinite(metrics_start), "scenario.metrics_start", "must be finite");
  require(metrics_start <= duration, "scenario.metrics_start",
          "must not exceed scenario.duration");
  require(metrics_end < 0.0 || metrics_end > metrics_start,
          "scenario.metrics_end", "must exceed metrics_start");

  require(finite_positive(sweep_period), "joints.sweep_period", "must be > 0");
  if (joint_program == JointProgramKind::kCustomTable) {
    require(custom_times.size() >= 2 && custom_times.size() == custom_knots.size(),
            "joints.custom_times", "needs >= 2 entries matching custom_knots");
    for (std::size_t i = 1; i < custom_times.size(); ++i) {
      require(custom_times[i] > custom_times[i - 1], "joints.custom_times",
              "must be strictly increasing");
    }
  }

  require(step.force.allFinite() && std::isfinite(step.time),
          "disturbance.step_force", "must be finite");
  require(finite_positive(control.estimator_cutoff),
          "disturbance.estimator_cutoff", "must be > 0");
  require(control.truth_iterations >= 0, "disturbance.truth_iterations",
          "must be >= 0");
  require(finite_positive(control.limits.max_thrust_factor),
          "controller.limits.max_thrust_factor", "must be > 0");
  require(finite_positive(control.limits.max_torque),
          "controller.limits.max_torque", "must be > 0");

  require(finite_positive(model.uav.m_b), "uav.mass", "must be > 0");
  require(finite_positive(model.uav.J.minCoeff()), "uav.inertia",
          "all moments must be > 0");
  require(finite_positive(model.uav.g), "uav.gravity", "must be > 0");
  for (const LinkParams& link : model.arm.links) {
    require(finite_positive(link.mass), "arm.links.mass", "must be > 0");
    require(link.inertia_com.isApprox(link.inertia_com.transpose(), 1e-12),
            "arm.links.inertia", "must be symmetric");
  }

  for (double k : backstep.k) {
    require(finite_positive(k), "backstepping.k", "all gains must be > 0");
  }
  for (double eta : backstep.eta) {
    require(eta > 0.0 && eta < 1.0, "backstepping.eta", "must lie in (0, 1)");
  }
  for (double kp : {pid.kp_xy, pid.kp_z, pid.kp_vxy, pid.kp_vz,
                    pid.kp_roll_pitch, pid.kp_yaw, pid.kp_pq, pid.kp_r}) {
    require(finite_positive(kp), "pid", "proportional gains must be > 0");
  }
  require(std::isfinite(pid.integral_limit) && pid.integral_limit >= 0.0,
          "pid.integral_limit", "must be finite and >= 0");
  require(std::isfinite(pid.derivative_cutoff) && pid.derivative_cutoff >= 0.0,
          "pid.derivative_cutoff", "must be finite and >= 0");

  require(network.nodes >= 1, "network.nodes", "must be >= 1");
  require(finite_positive(network.width_factor), "network.width_factor",
          "must be > 0");
  require(std::isfinite(network.pad_fraction) && network.pad_fraction >= 0.0,
          "network.pad_fraction", "must be >= 0");
  require(network.min_half_width.size() == 12 &&
              (network.min_half_width.array() >= 0.0).all(),
          "network.min_half_width", "needs 12 non-negative entries");
  require(network.error_cutoff >= 0.0, "network.error_cutoff", "must be >= 0");
  if (network.bounds == NetworkBounds::kExplicit) {
    require(network.lower.size() == 12 && network.upper.size() == 12 &&
                (network.lower.array() < network.upper.array()).all(),
            "network.lower", "needs 12 entries strictly below network.upper");
  }
}

JointTrajectory make_joint_program(const ScenarioConfig& cfg) {
  switch (cfg.joint_program) {
    case JointProgramKind::kStatic: {
      const Vec4 pose = cfg.static_pose;
      return [pose](double) {
        ManipulatorState m;
        m.q = pose;
        return m;
      };
    }
    case JointProgramKind::kEq21:
      return joint_program_eq21;
    case JointProgramKind::kExperimentSweep: {
      const double period = cfg.sweep_period;
      const double amplitude = cfg.sweep_amplitude;
      const Vec4 pose = cfg.sweep_pose;
      return [=](double t) {
        return joint_program_experiment(t, period, amplitude, pose);
      };
    }
    case JointProgramKind::kCustomTable: {
      auto spline = std::make_shared<JointSpline>(cfg.custom_times, cfg.custom_knots);
      return [spline](double t) { return (*spline)(t); };
    }
  }
  throw std::invalid_argument("unknown joint program");
}

ControlReference reference_generator(double t, const ScenarioConfig& cfg) {
  ControlReference ref;
  const double h = cfg.hover_height;
  if (t < cfg.takeoff_time) return ref;
  if (cfg.takeoff_profile == TakeoffProfile::kStep) {
    ref.position.z() = -h;
    return ref;
  }
  const double T = cfg.takeoff_ramp;
  const double s = (t - cfg.takeoff_time) / T;
  if (s >= 1.0) {
    ref.position.z() = -h;
    return ref;
  }
  const double s2 = s * s, s3 = s2 * s;
  const double p = s3 * (10.0 - 15.0 * s + 6.0 * s2);
  const double dp = 30.0 * s2 * (1.0 - 2.0 * s + s2) / T;
  const double ddp = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s2) / (T * T);
  ref.position.z() = -h * p;
  ref.velocity.z() = -h * dp;
  ref.acceleration.z() = -h * ddp;
  return ref;
}

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kPid: return "pid";
    case ControllerKind::kPidFf: return "pid_ff";
    case ControllerKind::kAnnb: return "annb";
  }
  return "unknown";
}

std::unique_ptr<Controller> make_controller(const ScenarioConfig& cfg) {
  switch (cfg.controller) {
    case ControllerKind::kPid:
      return std::make_unique<PidController>(cfg.model, cfg.pid, false, cfg.control);
    case ControllerKind::kPidFf:
      return std::make_unique<PidController>(cfg.model, cfg.pid, true, cfg.control);
    case ControllerKind::kAnnb: {
      NetworkOptions nn;
      nn.enabled = cfg.network.enabled;
      nn.learning = cfg.network.learning;
      nn.nodes = cfg.network.nodes;
      nn.width_factor = cfg.network.width_factor;
      nn.dt_scaled_update = cfg.network.dt_scaled_update;
      nn.error_cutoff = cfg.network.error_cutoff;
      nn.lower = cfg.network.lower;
      nn.upper = cfg.network.upper;
      nn.seed = cfg.seed;
      return std::make_unique<AnnbController>(cfg.model, cfg.backstep, nn,
                                              cfg.control, cfg.roll_gyro);
    }
  }
  throw std::invalid_argument("unknown controller");
}

void envelope_bounds(const TrajectoryLog& log, double t_start,
                     const NetworkSetup& setup, Eigen::VectorXd& lower,
                     Eigen::VectorXd& upper) {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(12, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (const LogRecord& r : log.records) {
    if (r.t < t_start) continue;
    const Eigen::VectorXd x = network_input(r.state);
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  if (!lo.allFinite()) {
    lo.setZero();
    hi.setZero();
  }
  lower.resize(12);
  upper.resize(12);
  for (int d = 0; d < 12; ++d) {
    const double range = hi[d] - lo[d];
    const double center = 0.5 * (hi[d] + lo[d]);
    const double half = std::max(0.5 * range + setup.pad_fraction * range,
                                 setup.min_half_width[d]);
    lower[d] = center - half;
    upper[d] = center + half;
  }
}

namespace {

TrajectoryLog simulate(const ScenarioConfig& cfg) {
  const PlantModel& model = cfg.model;
  const MassBudget masses = model.masses();
  const JointTrajectory joints = make_joint_program(cfg);
  std::unique_ptr<Controller> controller = make_controller(cfg);

  TrajectoryLog log;
  log.controller = controller->name();
  const int sub = static_cast<int>(std::lround(cfg.control_dt / cfg.physics_dt));
  const long steps = std::lround(cfg.duration / cfg.control_dt);
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  auto external_force = [&](double t, const UavState& s) -> Vec3 {
    if (!cfg.step.enabled || t < cfg.step.time - 1e-12) return Vec3::Zero();
    if (cfg.step.frame == Frame::kBody) {
      return rotation_from_euler(s.euler) * cfg.step.force;
    }
    return cfg.step.force;
  };

  UavState state;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.control_dt;
    const ManipulatorState manip = joints(t);
    Wrench f_ext;
    f_ext.force = external_force(t, state);
    const InertiaParams ip = compute_inertia_params(model.arm, masses, manip);

    ControlInput in;
    in.t = t;
    in.state = state;
    in.reference = reference_generator(t, cfg);
    in.manip = manip;
    in.plant_response = [&](const ControlWrench& u) {
      return assemble_accelerations(model, state, ip, u, f_ext);
    };

    ControlOutput out;
    Accelerations acc;
    try {
      out = controller->update(in, cfg.control_dt);
      acc = assemble_accelerations(model, state, ip, out.wrench, f_ext);
    } catch (const std::exception& e) {
      log.diverged = true;
      log.divergence_time = t;
      log.diagnostic = e.what();
      return log;
    }
    if (out.thrust_degenerate) ++log.flagged_degenerate;
    if (out.attitude_saturated) ++log.flagged_saturated;

    LogRecord rec;
    rec.t = t;
    rec.state = state;
    rec.manip = manip;
    rec.control = out.wrench;
    rec.truth = coupling_wrench(model, state, ip, acc);
    rec.feedforward = out.feedforward;
    rec.nn = out.nn;
    rec.reference = in.reference;
    rec.attitude_cmd = out.attitude_cmd.angles;
    rec.external_force = f_ext.force;
    log.records.push_back(rec);
    if (k == steps) break;

    try {
      for (int j = 0; j < sub; ++j) {
        const double ts = static_cast<double>(k * sub + j) * cfg.physics_dt;
        Wrench held;
        held.force = external_force(ts, state);
        state = step_rk4(model, state, ts, cfg.physics_dt, joints, out.wrench,
                         [&held](double) { return held; });
      }
      if (state.position.norm() > 1e3) {
        throw DivergenceError("position left the 1 km envelope", t + cfg.control_dt);
      }
    } catch (const DivergenceError& e) {
      log.diverged = true;
      log.divergence_time = e.time();
      log.diagnostic = e.what();
      return log;
    }
  }
  return log;
}

}  // namespace

TrajectoryLog run_scenario(const ScenarioConfig& cfg_in) {
  cfg_in.validate();
  ScenarioConfig cfg = cfg_in;
  if (cfg.controller == ControllerKind::kAnnb && cfg.network.enabled &&
      cfg.network.bounds == NetworkBounds::kDryRun) {
    ScenarioConfig dry = cfg;
    dry.network.enabled = false;
    const TrajectoryLog probe = simulate(dry);
    const double start = cfg.network.dry_run_window_start >= 0.0
                             ? cfg.network.dry_run_window_start
                             : cfg.takeoff_time + cfg.takeoff_ramp;
    envelope_bounds(probe, start, cfg.network, cfg.network.lower, cfg.network.upper);
  }
  TrajectoryLog log = simulate(cfg);
  if (cfg.controller == ControllerKind::kAnnb) {
    log.nn_lower = cfg.network.lower;
    log.nn_upper = cfg.network.upper;
  }
  return log;
}

std::string log_csv_header() {
  return "t[s],x[m],y[m],z[m],vx[m/s],vy[m/s],vz[m/s],roll[rad],pitch[rad],"
         "yaw[rad],p[rad/s],q[rad/s],r[rad/s],"
         "q1[rad],q2[rad],q3[rad],q4[rad],"
         "qd1[rad/s],qd2[rad/s],qd3[rad/s],qd4[rad/s],"
         "qdd1[rad/s^2],qdd2[rad/s^2],qdd3[rad/s^2],qdd4[rad/s^2],"
         "thrust[N],tau_roll[N*m],tau_pitch[N*m],tau_yaw[N*m],"
         "fdis_x[N],fdis_y[N],fdis_z[N],"
         "taudis_x[N*m],taudis_y[N*m],taudis_z[N*m],"
         "ff_fdis_x[N],ff_fdis_y[N],ff_fdis_z[N],"
         "ff_taudis_x[N*m],ff_taudis_y[N*m],ff_taudis_z[N*m],"
         "nn_x[m/s^2],nn_y[m/s^2],nn_z[m/s^2],"
         "nn_roll[rad/s^2],nn_pitch[rad/s^2],nn_yaw[rad/s^2],"
         "x_d[m],y_d[m],z_d[m],roll_cmd[rad],pitch_cmd[rad],yaw_cmd[rad],"
         "fext_x[N],fext_y[N],fext_z[N]";
}

void write_log_csv(const TrajectoryLog& log, std::ostream& out) {
  out << log_csv_header() << '\n';
  char buf[32];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    if (!first) out << ',';
    out << buf;
  };
  auto put3 = [&](const Vec3& v) {
    for (int i = 0; i < 3; ++i) put(v[i]);
  };
  auto put4 = [&](const Vec4& v) {
    for (int i = 0; i < 4; ++i) put(v[i]);
  };
  for (const LogRecord& r : log.records) {
    put(r.t, true);
    put3(r.state.position);
    put3(r.state.velocity);
    put3(r.state.euler);
    put3(r.state.body_rates);
    put4(r.manip.q);
    put4(r.manip.qd);
    put4(r.manip.qdd);
    put(r.control.thrust);
    put3(r.control.torque);
    put3(r.truth.force);
    put3(r.truth.torque);
    put3(r.feedforward.force);
    put3(r.feedforward.torque);
    for (double v : r.nn) put(v);
    put3(r.reference.position);
    put3(r.attitude_cmd);
    put3(r.external_force);
    out << '\n';
  }
}

}  // namespace amsim
