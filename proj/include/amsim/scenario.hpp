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

// Closed-loop simulation harness: reference and joint programs, the
// takeoff / hover / arm sweep / step disturbance protocol, and logging.

#ifndef AMSIM_SCENARIO_HPP_
#define AMSIM_SCENARIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "amsim/controllers.hpp"
#include "amsim/dynamics.hpp"
#include "amsim/types.hpp"

namespace amsim {

enum class JointProgramKind { kStatic, kEq21, kExperimentSweep, kCustomTable };
enum class ControllerKind { kPid, kPidFf, kAnnb };
enum class TakeoffProfile { kQuintic, kStep };
enum class NetworkBounds { kDryRun, kExplicit };

// Piecewise joint program:
//   q1 = (π/3) sin(π/10 (t - 10)),  q2 = (π/3) sin(2π/15 (t - 10))  for t >= 10
//   q1 = q2 = 0 before,  q3 = -π/2,  q4 = 0
ManipulatorState joint_program_eq21(double t);

// Joint 2 swings as amplitude·sin(2π t / period); other joints stay at `pose`.
ManipulatorState joint_program_experiment(double t, double period,
                                          double amplitude = kPi / 2.0,
                                          const Vec4& pose = Vec4::Zero());

// Natural cubic spline through (times[i], knots[i]) per joint. Outside the
// table the end knots are held with zero rates.
class JointSpline {
 public:
  JointSpline() = default;
  JointSpline(std::vector<double> times, std::vector<Vec4> knots);

  ManipulatorState operator()(double t) const;
  bool empty() const { return times_.empty(); }

 private:
  std::vector<double> times_;
  std::vector<Vec4> knots_;
  std::vector<Vec4> second_;  // second derivatives at the knots
};

struct StepDisturbance {
  bool enabled = true;
  double time = 15.0;                   // s
  Vec3 force = Vec3(0.0, 0.0, 3.75);    // N
  Frame frame = Frame::kInertial;       // body forces are rotated at each control step
};

struct NetworkSetup {
  bool enabled = true;
  bool learning = true;
  int nodes = 25;
  double width_factor = 2.0;
  bool dt_scaled_update = false;
  // rad/s; the bare E diverges through the x -> theta_d -> pitch coupling
  double error_cutoff = 200.0;
  NetworkBounds bounds = NetworkBounds::kDryRun;
  // Dry-run window start; negative means the end of the takeoff ramp.
  double dry_run_window_start = -1.0;
  double pad_fraction = 0.25;
  // Minimum half-width of each bound interval, in state-vector order.
  Eigen::VectorXd min_half_width = (Eigen::VectorXd(12) << 0.05, 0.1, 0.05, 0.1,
                                    0.05, 0.1, 0.05, 0.2, 0.05, 0.2, 0.05, 0.2)
                                       .finished();
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(12, -1.0);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(12, 1.0);
};

struct ScenarioConfig {
  double duration = 40.0;
  double physics_dt = 1e-3;
  double control_dt = 2e-3;
  double takeoff_time = 1.0;
  double takeoff_ramp = 2.0;
  double hover_height = 1.0;  // m above the origin; z_d = -hover_height
  TakeoffProfile takeoff_profile = TakeoffProfile::kQuintic;

  JointProgramKind joint_program = JointProgramKind::kEq21;
  Vec4 static_pose = Vec4(0.0, 0.0, -kPi / 2.0, 0.0);
  double sweep_period = 10.0;
  double sweep_amplitude = kPi / 2.0;
  Vec4 sweep_pose = Vec4::Zero();
  std::vector<double> custom_times;
  std::vector<Vec4> custom_knots;

  StepDisturbance step{};
  ControllerKind controller = ControllerKind::kAnnb;
  std::uint64_t seed = 1;

  PlantModel model{};
  BackstepGains backstep{};
  PidGains pid{};
  ControllerOptions control{};
  RollGyroTerm roll_gyro = RollGyroTerm::kStateSpace;
  NetworkSetup network{};

  // Metric window; a negative end means the scenario duration.
  double metrics_start = 10.0;
  double metrics_end = -1.0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Joint trajectory selected by the config.
JointTrajectory make_joint_program(const ScenarioConfig& cfg);

// Quintic takeoff 0 -> -hover_height over [takeoff_time, takeoff_time + ramp].
ControlReference reference_generator(double t, const ScenarioConfig& cfg);

struct LogRecord {
  double t = 0.0;
  UavState state{};
  ManipulatorState manip{};
  ControlWrench control{};
  Wrench truth{};        // coupling wrench from plant accelerations
  Wrench feedforward{};  // controller-side estimate
  std::array<double, 6> nn{};
  ControlReference reference{};
  Vec3 attitude_cmd = Vec3::Zero();
  Vec3 external_force = Vec3::Zero();  // inertial
};

struct TrajectoryLog {
  std::string controller;
  std::vector<LogRecord> records;
  bool diverged = false;
  double divergence_time = 0.0;
  std::string diagnostic;
  std::uint64_t flagged_degenerate = 0;
  std::uint64_t flagged_saturated = 0;
  Eigen::VectorXd nn_lower, nn_upper;  // bounds used for the centers
};

// Builds the controller for cfg.controller. For ANNB the network bounds must
// already be resolved into cfg.network.lower/upper.
std::unique_ptr<Controller> make_controller(const ScenarioConfig& cfg);

// Runs the scenario. Network bounds are resolved first (dry run with the
// networks disabled when requested). A divergence stops the run and returns
// the partial log with diverged = true.
TrajectoryLog run_scenario(const ScenarioConfig& cfg);

// Post-takeoff state envelope of a log, padded per NetworkSetup.
void envelope_bounds(const TrajectoryLog& log, double t_start,
                     const NetworkSetup& setup, Eigen::VectorXd& lower,
                     Eigen::VectorXd& upper);

// Tidy CSV, one row per control step, units in the header.
void write_log_csv(const TrajectoryLog& log, std::ostream& out);
std::string log_csv_header();

const char* controller_name(ControllerKind kind);

}  // namespace amsim

#endif  // AMSIM_SCENARIO_HPP_
