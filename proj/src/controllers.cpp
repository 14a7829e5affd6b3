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

#include "amsim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace amsim {

PositionLaw annb_position(const UavState& state, const ControlReference& ref,
                          const BackstepGains& gains, double mass, double g,
                          const Vec3& nn_out, const Vec3& f_dis_hat) {
  PositionLaw law;
  for (int axis = 0; axis < 3; ++axis) {
    const double k_pos = gains.k[2 * axis];
    const double k_vel = gains.k[2 * axis + 1];
    const double z_pos = state.position[axis] - ref.position[axis];
    const double alpha = -k_pos * z_pos + ref.velocity[axis];
    const double z_vel = state.velocity[axis] - alpha;
    const double alpha_dot =
        -k_pos * (state.velocity[axis] - ref.velocity[axis]) +
        ref.acceleration[axis];
    const double gravity = axis == 2 ? g : 0.0;
    law.u[axis] =
        mass * (-k_vel * z_vel + alpha_dot - gravity - nn_out[axis] - z_pos) -
        f_dis_hat[axis];
    law.z[2 * axis] = z_pos;
    law.z[2 * axis + 1] = z_vel;
  }
  return law;
}

ThrustAttitude thrust_attitude_extract(const Vec3& u, double yaw,
                                       double hold_roll, double hold_pitch) {
  ThrustAttitude out;
  out.thrust = u.norm();
  if (out.thrust < kMinThrust) {
    out.degenerate = true;
    out.roll = hold_roll;
    out.pitch = hold_pitch;
    return out;
  }
  const double c = std::cos(yaw), s = std::sin(yaw);
  double arg = (u.y() * c - u.x() * s) / out.thrust;
  if (arg > 1.0 || arg < -1.0) {
    out.saturated = true;
    arg = std::clamp(arg, -1.0, 1.0);
  }
  out.roll = std::asin(arg);
  out.pitch = std::atan((u.x() * c + u.y() * s) / u.z());
  return out;
}

Vec3 thrust_vector(double thrust, double roll, double pitch, double yaw) {
  const double cf = std::cos(roll), sf = std::sin(roll);
  const double ct = std::cos(pitch), st = std::sin(pitch);
  const double cp = std::cos(yaw), sp = std::sin(yaw);
  return Vec3(-thrust * (cf * st * cp + sf * sp),
              -thrust * (cf * st * sp - sf * cp),
              -thrust * cf * ct);
}

AttitudeLaw annb_attitude(const UavState& state, const AttitudeReference& ref,
                          const BackstepGains& gains, const Vec3& J,
                          const Vec3& nn_out, const Vec3& tau_dis_hat,
                          RollGyroTerm roll_gyro) {
  AttitudeLaw law;
  Vec3 z_ang, z_rate;
  for (int axis = 0; axis < 3; ++axis) {
    const double k_ang = gains.k[6 + 2 * axis];
    z_ang[axis] = state.euler[axis] - ref.angles[axis];
    const double alpha = -k_ang * z_ang[axis] + ref.rates[axis];
    z_rate[axis] = state.body_rates[axis] - alpha;
    law.z[2 * axis] = z_ang[axis];
    law.z[2 * axis + 1] = z_rate[axis];
  }
  const double p = state.body_rates.x();
  const double q = state.body_rates.y();
  const double r = state.body_rates.z();
  const double roll_gyro_factor =
      roll_gyro == RollGyroTerm::kStateSpace ? q : state.euler.z();

  law.torque.x() = J.x() * (-gains.k[7] * z_rate.x() - nn_out.x() - z_ang.x()) -
                   tau_dis_hat.x() - J.y() * roll_gyro_factor * r +
                   J.z() * r * p;
  law.torque.y() = J.y() * (-gains.k[9] * z_rate.y() - nn_out.y() - z_ang.y()) -
                   tau_dis_hat.y() - J.z() * r * q + J.x() * p * r;
  law.torque.z() = J.z() * (-gains.k[11] * z_rate.z() - nn_out.z() - z_ang.z()) -
                   tau_dis_hat.z() - J.x() * p * p + J.y() * q * q;
  return law;
}

ControlWrench saturate(const ControlWrench& u, const ActuatorLimits& limits,
                       double hover_thrust) {
  if (!limits.enabled) return u;
  ControlWrench out = u;
  out.thrust = std::clamp(u.thrust, 0.0, limits.max_thrust_factor * hover_thrust);
  for (int i = 0; i < 3; ++i) {
    out.torque[i] = std::clamp(u.torque[i], -limits.max_torque, limits.max_torque);
  }
  return out;
}

Eigen::VectorXd network_input(const UavState& state) {
  const StateVector x = to_state_vector(state);
  return Eigen::VectorXd(x);
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

// ---------------------------------------------------------------------------
// AnnbController

AnnbController::AnnbController(PlantModel model, BackstepGains gains,
                               NetworkOptions nn, ControllerOptions options,
                               RollGyroTerm roll_gyro)
    : model_(std::move(model)),
      masses_(model_.masses()),
      gains_(gains),
      nn_options_(std::move(nn)),
      options_(options),
      roll_gyro_(roll_gyro),
      estimator_(options.estimator_cutoff) {
  for (auto& e : error_signals_) e = ErrorSignal(nn_options_.error_cutoff);
  if (nn_options_.enabled) {
    for (int c = 0; c < 6; ++c) {
      networks_.push_back(make_lhs_network(
          nn_options_.lower, nn_options_.upper, nn_options_.nodes,
          nn_options_.width_factor, gains_.eta[c],
          nn_options_.seed * 1000003ULL + static_cast<std::uint64_t>(c)));
    }
  }
}

ControlOutput AnnbController::evaluate(const ControlInput& in,
                                       const Accelerations& acc, double dt,
                                       bool commit) {
  (void)commit;
  ControlOutput out;
  const UavState& s = in.state;
  const Eigen::VectorXd x = network_input(s);
  const double update_scale = nn_options_.dt_scaled_update ? dt : 1.0;

  if (options_.feedforward != FeedforwardSource::kOff) {
    out.feedforward = feedforward_wrench(model_, s, in.manip, acc);
  }

  // Learning step for one channel, then its current output.
  auto channel = [&](int c, const std::array<double, 12>& z) {
    const double e = error_signals_[c].update(z[2 * c + 1], z[2 * c],
                                              gains_.k[2 * c + 1], dt);
    out.nn_error[c] = e;
    if (networks_.empty()) return 0.0;
    if (nn_options_.learning) networks_[c].ogd_update(e, x, update_scale);
    return networks_[c].evaluate(x);
  };

  // Position loop.
  PositionLaw pos = annb_position(s, in.reference, gains_, masses_.m_s,
                                  model_.uav.g, Vec3::Zero(), Vec3::Zero());
  std::copy(pos.z.begin(), pos.z.end(), out.z.begin());
  Vec3 nn_pos;
  for (int c = 0; c < 3; ++c) nn_pos[c] = out.nn[c] = channel(c, out.z);
  pos = annb_position(s, in.reference, gains_, masses_.m_s, model_.uav.g,
                      nn_pos, out.feedforward.force);

  const ThrustAttitude ta = thrust_attitude_extract(
      pos.u, s.euler.z(), last_attitude_cmd_.x(), last_attitude_cmd_.y());
  out.thrust_degenerate = ta.degenerate;
  out.attitude_saturated = ta.saturated;

  // Attitude command and its filtered rate.
  Vec3 cmd(ta.roll, ta.pitch, in.reference.yaw);
  if (attitude_primed_) {
    const double a = lowpass_alpha(options_.estimator_cutoff, dt);
    const Vec3 raw = (cmd - last_attitude_cmd_) / dt;
    attitude_cmd_rate_ += a * (raw - attitude_cmd_rate_);
  }
  attitude_primed_ = true;
  last_attitude_cmd_ = cmd;
  AttitudeReference att;
  att.angles = cmd;
  att.rates = Vec3(attitude_cmd_rate_.x(), attitude_cmd_rate_.y(),
                   in.reference.yaw_rate);
  out.attitude_cmd = att;

  // Attitude loop.
  AttitudeLaw law = annb_attitude(s, att, gains_, model_.uav.J, Vec3::Zero(),
                                  Vec3::Zero(), roll_gyro_);
  std::copy(law.z.begin(), law.z.end(), out.z.begin() + 6);
  Vec3 nn_att;
  for (int c = 3; c < 6; ++c) nn_att[c - 3] = out.nn[c] = channel(c, out.z);
  law = annb_attitude(s, att, gains_, model_.uav.J, nn_att,
                      out.feedforward.torque, roll_gyro_);

  out.wrench.thrust = ta.thrust;
  out.wrench.torque = law.torque;
  out.wrench = saturate(out.wrench, options_.limits,
                        masses_.m_s * model_.uav.g);
  return out;
}

ControlOutput AnnbController::update(const ControlInput& in, double dt) {
  Accelerations acc = estimator_.update(in.state, dt);
  if (options_.feedforward == FeedforwardSource::kTruth && in.plant_response) {
    for (int i = 0; i < options_.truth_iterations; ++i) {
      AnnbController scratch = *this;
      acc = in.plant_response(scratch.evaluate(in, acc, dt, false).wrench);
    }
  }
  return evaluate(in, acc, dt, true);
}

// ---------------------------------------------------------------------------
// PidController

PidController::PidController(PlantModel model, PidGains gains,
                             bool use_feedforward, ControllerOptions options)
    : model_(std::move(model)),
      masses_(model_.masses()),
      gains_(gains),
      use_feedforward_(use_feedforward),
      options_(options),
      estimator_(options.estimator_cutoff) {}

namespace {

double clamp_integral(double integral, double ki, double limit) {
  if (ki <= 0.0) return integral;
  const double bound = limit / ki;
  return std::clamp(integral, -bound, bound);
}

}  // namespace

ControlOutput PidController::pid_ff(const UavState& state,
                                    const ControlReference& ref,
                                    const Wrench& feedforward, double dt) {
  ControlOutput out;
  out.feedforward = feedforward;
  const PidGains& k = gains_;
  const Vec3 kp_pos(k.kp_xy, k.kp_xy, k.kp_z);
  const Vec3 kp_vel(k.kp_vxy, k.kp_vxy, k.kp_vz);
  const Vec3 ki_vel(k.ki_vxy, k.ki_vxy, k.ki_vz);
  const Vec3 kd_vel(k.kd_vxy, k.kd_vxy, k.kd_vz);
  const Vec3 kp_att(k.kp_roll_pitch, k.kp_roll_pitch, k.kp_yaw);
  const Vec3 kp_rate(k.kp_pq, k.kp_pq, k.kp_r);
  const Vec3 ki_rate(k.ki_pq, k.ki_pq, k.ki_r);
  const Vec3 kd_rate(k.kd_pq, k.kd_pq, k.kd_r);
  const double a = k.derivative_cutoff > 0.0 ? lowpass_alpha(k.derivative_cutoff, dt) : 1.0;
  auto filter = [&](double state, double raw) {
    return primed_ ? state + a * (raw - state) : 0.0;
  };

  // Position -> velocity command -> acceleration command.
  const Vec3 vel_cmd =
      kp_pos.cwiseProduct(ref.position - state.position) + ref.velocity;
  const Vec3 vel_err = vel_cmd - state.velocity;
  Vec3 accel_cmd = ref.acceleration;
  for (int i = 0; i < 3; ++i) {
    vel_integral_[i] = clamp_integral(vel_integral_[i] + vel_err[i] * dt,
                                      ki_vel[i], k.integral_limit);
    const double raw = primed_ ? (vel_err[i] - last_vel_error_[i]) / dt : 0.0;
    vel_derivative_[i] = filter(vel_derivative_[i], raw);
    accel_cmd[i] += kp_vel[i] * vel_err[i] + ki_vel[i] * vel_integral_[i] +
                    kd_vel[i] * vel_derivative_[i];
  }
  last_vel_error_ = vel_err;

  const Vec3 u = masses_.m_s * (accel_cmd - model_.uav.g * Vec3::UnitZ()) -
                 feedforward.force;
  const ThrustAttitude ta = thrust_attitude_extract(
      u, state.euler.z(), last_attitude_cmd_.x(), last_attitude_cmd_.y());
  out.thrust_degenerate = ta.degenerate;
  out.attitude_saturated = ta.saturated;
  const Vec3 att_cmd(ta.roll, ta.pitch, ref.yaw);
  last_attitude_cmd_ = att_cmd;
  out.attitude_cmd.angles = att_cmd;
  out.attitude_cmd.rates = Vec3(0.0, 0.0, ref.yaw_rate);

  // Attitude -> rate command -> torque.
  Vec3 att_err = att_cmd - state.euler;
  att_err.z() = wrap_angle(att_err.z());
  const Vec3 rate_cmd =
      kp_att.cwiseProduct(att_err) + Vec3(0.0, 0.0, ref.yaw_rate);
  const Vec3 rate_err = rate_cmd - state.body_rates;
  Vec3 torque;
  for (int i = 0; i < 3; ++i) {
    rate_integral_[i] = clamp_integral(rate_integral_[i] + rate_err[i] * dt,
                                       ki_rate[i], k.integral_limit);
    const double raw = primed_ ? (rate_err[i] - last_rate_error_[i]) / dt : 0.0;
    rate_derivative_[i] = filter(rate_derivative_[i], raw);
    torque[i] = kp_rate[i] * rate_err[i] + ki_rate[i] * rate_integral_[i] +
                kd_rate[i] * rate_derivative_[i];
  }
  last_rate_error_ = rate_err;
  primed_ = true;

  out.wrench.thrust = ta.thrust;
  out.wrench.torque = torque - feedforward.torque;
  out.wrench = saturate(out.wrench, options_.limits,
                        masses_.m_s * model_.uav.g);
  return out;
}

ControlOutput PidController::update(const ControlInput& in, double dt) {
  Accelerations acc = estimator_.update(in.state, dt);
  if (!use_feedforward_ || options_.feedforward == FeedforwardSource::kOff) {
    return pid_cascade(in.state, in.reference, dt);
  }
  if (options_.feedforward == FeedforwardSource::kTruth && in.plant_response) {
    for (int i = 0; i < options_.truth_iterations; ++i) {
      PidController scratch = *this;
      const Wrench ff = feedforward_wrench(model_, in.state, in.manip, acc);
      acc = in.plant_response(scratch.pid_ff(in.state, in.reference, ff, dt).wrench);
    }
  }
  return pid_ff(in.state, in.reference,
                feedforward_wrench(model_, in.state, in.manip, acc), dt);
}

}  // namespace amsim
