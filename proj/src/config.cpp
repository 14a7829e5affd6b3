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

#include "amsim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace amsim {

using nlohmann::json;

namespace {

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<JointProgramKind> kJointPrograms[] = {
    {JointProgramKind::kStatic, "static"},
    {JointProgramKind::kEq21, "eq21"},
    {JointProgramKind::kExperimentSweep, "experiment_sweep"},
    {JointProgramKind::kCustomTable, "custom"}};
constexpr EnumName<ControllerKind> kControllers[] = {
    {ControllerKind::kPid, "pid"},
    {ControllerKind::kPidFf, "pid_ff"},
    {ControllerKind::kAnnb, "annb"}};
constexpr EnumName<TakeoffProfile> kTakeoff[] = {
    {TakeoffProfile::kQuintic, "quintic"}, {TakeoffProfile::kStep, "step"}};
constexpr EnumName<NetworkBounds> kBounds[] = {
    {NetworkBounds::kDryRun, "dry_run"}, {NetworkBounds::kExplicit, "explicit"}};
constexpr EnumName<Frame> kFrames[] = {{Frame::kInertial, "inertial"},
                                       {Frame::kBody, "body"}};
constexpr EnumName<FeedforwardSource> kFeedforward[] = {
    {FeedforwardSource::kOff, "off"},
    {FeedforwardSource::kEstimated, "estimated"},
    {FeedforwardSource::kTruth, "truth"}};
constexpr EnumName<RollGyroTerm> kRollGyro[] = {
    {RollGyroTerm::kStateSpace, "state_space"}, {RollGyroTerm::kLiteral, "literal"}};
constexpr EnumName<AttitudeKinematics> kAttitudeKinematics[] = {
    {AttitudeKinematics::kBodyRatesAsEulerRates, "body_rates"},
    {AttitudeKinematics::kExact, "exact"}};

template <typename Enum, std::size_t N>
std::string enum_to_string(const EnumName<Enum> (&table)[N], Enum v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "unknown";
}

template <typename Enum, std::size_t N>
Enum enum_from_string(const EnumName<Enum> (&table)[N], const json& j,
                      const std::string& key) {
  const std::string s = j.get<std::string>();
  for (const auto& e : table) {
    if (s == e.name) return e.value;
  }
  std::string allowed;
  for (const auto& e : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += e.name;
  }
  throw ConfigError(key + ": unknown value \"" + s + "\" (expected one of " +
                    allowed + ")");
}

template <typename Derived>
json vec_json(const Eigen::MatrixBase<Derived>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) a.push_back(vec_json(Vec3(m.row(r).transpose())));
  return a;
}

Eigen::VectorXd vec_from(const json& j, const std::string& key,
                         Eigen::Index expected = -1) {
  if (!j.is_array()) throw ConfigError(key + ": expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw ConfigError(key + ": expected " + std::to_string(expected) +
                      " entries, got " + std::to_string(j.size()));
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(key + ": entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Mat3 mat_from(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(key + ": expected 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    m.row(r) = vec_from(j[r], key, 3).transpose();
  }
  return m;
}

json to_document(const ScenarioConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["scenario"] = {
      {"duration", c.duration},
      {"physics_dt", c.physics_dt},
      {"control_dt", c.control_dt},
      {"takeoff_time", c.takeoff_time},
      {"takeoff_ramp", c.takeoff_ramp},
      {"takeoff_profile", enum_to_string(kTakeoff, c.takeoff_profile)},
      {"hover_height", c.hover_height},
      {"metrics_start", c.metrics_start},
      {"metrics_end", c.metrics_end}};
  json knots = json::array();
  for (const Vec4& k : c.custom_knots) knots.push_back(vec_json(k));
  j["joints"] = {
      {"program", enum_to_string(kJointPrograms, c.joint_program)},
      {"static_pose", vec_json(c.static_pose)},
      {"sweep_period", c.sweep_period},
      {"sweep_amplitude", c.sweep_amplitude},
      {"sweep_pose", vec_json(c.sweep_pose)},
      {"custom_times", c.custom_times},
      {"custom_knots", knots}};
  j["disturbance"] = {
      {"step_enabled", c.step.enabled},
      {"step_time", c.step.time},
      {"step_force", vec_json(c.step.force)},
      {"step_frame", enum_to_string(kFrames, c.step.frame)},
      {"feedforward", enum_to_string(kFeedforward, c.control.feedforward)},
      {"estimator_cutoff", c.control.estimator_cutoff},
      {"truth_iterations", c.control.truth_iterations}};
  j["controller"] = {
      {"type", enum_to_string(kControllers, c.controller)},
      {"roll_gyro", enum_to_string(kRollGyro, c.roll_gyro)},
      {"limits",
       {{"enabled", c.control.limits.enabled},
        {"max_thrust_factor", c.control.limits.max_thrust_factor},
        {"max_torque", c.control.limits.max_torque}}}};
  j["uav"] = {
      {"mass", c.model.uav.m_b},
      {"inertia", vec_json(c.model.uav.J)},
      {"gravity", c.model.uav.g},
      {"attitude_kinematics",
       enum_to_string(kAttitudeKinematics, c.model.attitude_kinematics)}};
  json dh = json::array();
  for (const DhRow& r : c.model.arm.dh) {
    dh.push_back({{"alpha_prev", r.alpha_prev},
                  {"a_prev", r.a_prev},
                  {"d", r.d},
                  {"theta_offset", r.theta_offset}});
  }
  json links = json::array();
  for (const LinkParams& l : c.model.arm.links) {
    links.push_back({{"mass", l.mass},
                     {"com", vec_json(l.com)},
                     {"inertia", mat_json(l.inertia_com)}});
  }
  j["arm"] = {
      {"dh", dh},
      {"links", links},
      {"mount",
       {{"rotation", mat_json(c.model.arm.mount.rotation)},
        {"translation", vec_json(c.model.arm.mount.translation)}}},
      {"joint_lower", vec_json(c.model.arm.joint_lower)},
      {"joint_upper", vec_json(c.model.arm.joint_upper)}};
  j["backstepping"] = {{"k", c.backstep.k}, {"eta", c.backstep.eta}};
  const PidGains& p = c.pid;
  j["pid"] = {{"kp_xy", p.kp_xy},       {"kp_z", p.kp_z},
              {"kp_vxy", p.kp_vxy},     {"kp_vz", p.kp_vz},
              {"ki_vxy", p.ki_vxy},     {"ki_vz", p.ki_vz},
              {"kd_vxy", p.kd_vxy},     {"kd_vz", p.kd_vz},
              {"kp_roll_pitch", p.kp_roll_pitch},
              {"kp_yaw", p.kp_yaw},     {"kp_pq", p.kp_pq},
              {"kp_r", p.kp_r},         {"ki_pq", p.ki_pq},
              {"ki_r", p.ki_r},         {"kd_pq", p.kd_pq},
              {"kd_r", p.kd_r},         {"integral_limit", p.integral_limit},
              {"derivative_cutoff", p.derivative_cutoff}};
  const NetworkSetup& n = c.network;
  j["network"] = {
      {"enabled", n.enabled},
      {"learning", n.learning},
      {"nodes", n.nodes},
      {"width_factor", n.width_factor},
      {"dt_scaled_update", n.dt_scaled_update},
      {"error_cutoff", n.error_cutoff},
      {"bounds", enum_to_string(kBounds, n.bounds)},
      {"dry_run_window_start", n.dry_run_window_start},
      {"pad_fraction", n.pad_fraction},
      {"min_half_width", vec_json(n.min_half_width)},
      {"lower", vec_json(n.lower)},
      {"upper", vec_json(n.upper)}};
  return j;
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    // Integers stay integers; floats accept any number.
    return !(a.is_number_integer() && b.is_number_float());
  }
  return a.type() == b.type();
}

// Overlays `user` onto `base`, rejecting keys `base` does not have.
void overlay(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError(key + ": unknown key");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      overlay(slot, it.value(), key);
    } else if (!same_kind(slot, it.value())) {
      throw ConfigError(key + ": expected " + std::string(slot.type_name()) +
                        ", got " + std::string(it.value().type_name()));
    } else {
      slot = it.value();
    }
  }
}

double num(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + ": expected a number");
  return j.get<double>();
}

void check_keys(const json& obj, std::initializer_list<const char*> keys,
                const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
  for (const char* k : keys) {
    if (!obj.contains(k)) throw ConfigError(path + "." + k + ": missing key");
  }
}

ScenarioConfig from_document(const json& j) {
  ScenarioConfig c;
  c.seed = j["seed"].get<std::uint64_t>();
  const json& s = j["scenario"];
  c.duration = num(s["duration"], "scenario.duration");
  c.physics_dt = num(s["physics_dt"], "scenario.physics_dt");
  c.control_dt = num(s["control_dt"], "scenario.control_dt");
  c.takeoff_time = num(s["takeoff_time"], "scenario.takeoff_time");
  c.takeoff_ramp = num(s["takeoff_ramp"], "scenario.takeoff_ramp");
  c.takeoff_profile =
      enum_from_string(kTakeoff, s["takeoff_profile"], "scenario.takeoff_profile");
  c.hover_height = num(s["hover_height"], "scenario.hover_height");
  c.metrics_start = num(s["metrics_start"], "scenario.metrics_start");
  c.metrics_end = num(s["metrics_end"], "scenario.metrics_end");

  const json& jt = j["joints"];
  c.joint_program = enum_from_string(kJointPrograms, jt["program"], "joints.program");
  c.static_pose = vec_from(jt["static_pose"], "joints.static_pose", 4);
  c.sweep_period = num(jt["sweep_period"], "joints.sweep_period");
  c.sweep_amplitude = num(jt["sweep_amplitude"], "joints.sweep_amplitude");
  c.sweep_pose = vec_from(jt["sweep_pose"], "joints.sweep_pose", 4);
  const Eigen::VectorXd times = vec_from(jt["custom_times"], "joints.custom_times");
  c.custom_times.assign(times.data(), times.data() + times.size());
  for (const json& k : jt["custom_knots"]) {
    c.custom_knots.push_back(vec_from(k, "joints.custom_knots", 4));
  }

  const json& d = j["disturbance"];
  c.step.enabled = d["step_enabled"].get<bool>();
  c.step.time = num(d["step_time"], "disturbance.step_time");
  c.step.force = vec_from(d["step_force"], "disturbance.step_force", 3);
  c.step.frame = enum_from_string(kFrames, d["step_frame"], "disturbance.step_frame");
  c.control.feedforward =
      enum_from_string(kFeedforward, d["feedforward"], "disturbance.feedforward");
  c.control.estimator_cutoff =
      num(d["estimator_cutoff"], "disturbance.estimator_cutoff");
  c.control.truth_iterations = d["truth_iterations"].get<int>();

  const json& ct = j["controller"];
  c.controller = enum_from_string(kControllers, ct["type"], "controller.type");
  c.roll_gyro = enum_from_string(kRollGyro, ct["roll_gyro"], "controller.roll_gyro");
  c.control.limits.enabled = ct["limits"]["enabled"].get<bool>();
  c.control.limits.max_thrust_factor =
      num(ct["limits"]["max_thrust_factor"], "controller.limits.max_thrust_factor");
  c.control.limits.max_torque =
      num(ct["limits"]["max_torque"], "controller.limits.max_torque");

  const json& u = j["uav"];
  c.model.uav.m_b = num(u["mass"], "uav.mass");
  c.model.uav.J = vec_from(u["inertia"], "uav.inertia", 3);
  c.model.uav.g = num(u["gravity"], "uav.gravity");
  c.model.attitude_kinematics = enum_from_string(
      kAttitudeKinematics, u["attitude_kinematics"], "uav.attitude_kinematics");

  const json& a = j["arm"];
  if (!a["dh"].is_array() || a["dh"].size() != kNumJoints) {
    throw ConfigError("arm.dh: expected 4 rows");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string key = "arm.dh[" + std::to_string(i) + "]";
    const json& r = a["dh"][i];
    check_keys(r, {"alpha_prev", "a_prev", "d", "theta_offset"}, key);
    c.model.arm.dh[i] = {num(r["alpha_prev"], key + ".alpha_prev"),
                         num(r["a_prev"], key + ".a_prev"),
                         num(r["d"], key + ".d"),
                         num(r["theta_offset"], key + ".theta_offset")};
  }
  if (!a["links"].is_array() || a["links"].size() != kNumJoints) {
    throw ConfigError("arm.links: expected 4 links");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string key = "arm.links[" + std::to_string(i) + "]";
    const json& l = a["links"][i];
    check_keys(l, {"mass", "com", "inertia"}, key);
    c.model.arm.links[i].mass = num(l["mass"], key + ".mass");
    c.model.arm.links[i].com = vec_from(l["com"], key + ".com", 3);
    c.model.arm.links[i].inertia_com = mat_from(l["inertia"], key + ".inertia");
  }
  c.model.arm.mount.rotation = mat_from(a["mount"]["rotation"], "arm.mount.rotation");
  c.model.arm.mount.translation =
      vec_from(a["mount"]["translation"], "arm.mount.translation", 3);
  const Mat3& rot = c.model.arm.mount.rotation;
  if ((rot.transpose() * rot - Mat3::Identity()).norm() > 1e-10 ||
      rot.determinant() < 0.0) {
    throw ConfigError("arm.mount.rotation: must be a proper rotation");
  }
  c.model.arm.joint_lower = vec_from(a["joint_lower"], "arm.joint_lower", 4);
  c.model.arm.joint_upper = vec_from(a["joint_upper"], "arm.joint_upper", 4);

  const json& b = j["backstepping"];
  const Eigen::VectorXd k = vec_from(b["k"], "backstepping.k", 12);
  const Eigen::VectorXd eta = vec_from(b["eta"], "backstepping.eta", 6);
  for (int i = 0; i < 12; ++i) c.backstep.k[i] = k[i];
  for (int i = 0; i < 6; ++i) c.backstep.eta[i] = eta[i];

  const json& p = j["pid"];
  PidGains& g = c.pid;
  g.kp_xy = num(p["kp_xy"], "pid.kp_xy");
  g.kp_z = num(p["kp_z"], "pid.kp_z");
  g.kp_vxy = num(p["kp_vxy"], "pid.kp_vxy");
  g.kp_vz = num(p["kp_vz"], "pid.kp_vz");
  g.ki_vxy = num(p["ki_vxy"], "pid.ki_vxy");
  g.ki_vz = num(p["ki_vz"], "pid.ki_vz");
  g.kd_vxy = num(p["kd_vxy"], "pid.kd_vxy");
  g.kd_vz = num(p["kd_vz"], "pid.kd_vz");
  g.kp_roll_pitch = num(p["kp_roll_pitch"], "pid.kp_roll_pitch");
  g.kp_yaw = num(p["kp_yaw"], "pid.kp_yaw");
  g.kp_pq = num(p["kp_pq"], "pid.kp_pq");
  g.kp_r = num(p["kp_r"], "pid.kp_r");
  g.ki_pq = num(p["ki_pq"], "pid.ki_pq");
  g.ki_r = num(p["ki_r"], "pid.ki_r");
  g.kd_pq = num(p["kd_pq"], "pid.kd_pq");
  g.kd_r = num(p["kd_r"], "pid.kd_r");
  g.integral_limit = num(p["integral_limit"], "pid.integral_limit");
  g.derivative_cutoff = num(p["derivative_cutoff"], "pid.derivative_cutoff");

  const json& n = j["network"];
  NetworkSetup& ns = c.network;
  ns.enabled = n["enabled"].get<bool>();
  ns.learning = n["learning"].get<bool>();
  ns.nodes = n["nodes"].get<int>();
  ns.width_factor = num(n["width_factor"], "network.width_factor");
  ns.dt_scaled_update = n["dt_scaled_update"].get<bool>();
  ns.error_cutoff = num(n["error_cutoff"], "network.error_cutoff");
  ns.bounds = enum_from_string(kBounds, n["bounds"], "network.bounds");
  ns.dry_run_window_start =
      num(n["dry_run_window_start"], "network.dry_run_window_start");
  ns.pad_fraction = num(n["pad_fraction"], "network.pad_fraction");
  ns.min_half_width = vec_from(n["min_half_width"], "network.min_half_width", 12);
  ns.lower = vec_from(n["lower"], "network.lower", 12);
  ns.upper = vec_from(n["upper"], "network.upper", 12);
  return c;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json user;
  try {
    user = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  json doc = to_document(ScenarioConfig{});
  overlay(doc, user, "");
  ScenarioConfig cfg;
  try {
    cfg = from_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  return to_document(cfg).dump(2) + "\n";
}

std::string default_config_json() { return config_to_json(ScenarioConfig{}); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace amsim
