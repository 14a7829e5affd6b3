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

// amsim command-line entry point.
//
//   amsim simulate --config cfg.json --out run/
//   amsim compare  --config cfg.json [--out dir]
//   amsim verify   --suite all
//   amsim --print-default-config
//
// Exit codes: 0 success, 1 failed checks, 2 usage error, 3 config error,
// 4 divergence, 5 output error.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amsim/config.hpp"
#include "amsim/metrics.hpp"
#include "amsim/scenario.hpp"
#include "amsim/verify.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kChecksFailed = 1,
  kUsage = 2,
  kConfigError = 3,
  kDiverged = 4,
  kOutputError = 5,
};

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct LoadedConfig {
  amsim::ScenarioConfig cfg;
  std::string bytes;  // hashed for the manifest
};

LoadedConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
  LoadedConfig out;
  if (path.empty()) {
    out.bytes = amsim::default_config_json();
    out.cfg = amsim::parse_config(out.bytes);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw amsim::ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    out.bytes = ss.str();
    out.cfg = amsim::parse_config(out.bytes);
  }
  if (seed) out.cfg.seed = *seed;
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError(dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw OutputError(path.string() + ": write failed");
}

std::string log_csv(const amsim::TrajectoryLog& log) {
  std::ostringstream ss;
  amsim::write_log_csv(log, ss);
  return ss.str();
}

double window_end(const amsim::ScenarioConfig& cfg) {
  return cfg.metrics_end < 0.0 ? cfg.duration : cfg.metrics_end;
}

void write_manifest(const fs::path& path, const LoadedConfig& lc,
                    const std::string& start, const std::vector<std::string>& outputs,
                    const std::string& status) {
  nlohmann::json m;
  m["config_hash"] = "fnv1a64:" + amsim::hex64(amsim::fnv1a64(lc.bytes));
  m["version"] = AMSIM_VERSION;
  m["seed"] = lc.cfg.seed;
  m["start_time_utc"] = start;
  m["end_time_utc"] = utc_now();
  m["outputs"] = outputs;
  m["status"] = status;
  write_file(path, m.dump(2) + "\n");
}

std::string stats_text(const amsim::TrajectoryLog& log, double t0, double t1) {
  const auto stats = amsim::log_stats(log, t0, t1);
  std::ostringstream ss;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "window [%.1f, %.1f] s\n%-8s %14s %14s %14s\n", t0,
                t1, "Channel", "Mean", "Maximum", "RMSE");
  ss << buf;
  for (int c = 0; c < 6; ++c) {
    std::snprintf(buf, sizeof(buf), "%-8s %14.6f %14.6f %14.6f\n",
                  amsim::kChannelNames[c], stats[c].mean, stats[c].max, stats[c].rmse);
    ss << buf;
  }
  return ss.str();
}

std::string summary_csv(const amsim::TrajectoryLog& log, const amsim::ScenarioConfig& cfg) {
  std::ostringstream ss;
  ss << "window,channel,mean,max,rmse\n";
  char buf[128];
  const double windows[2][2] = {{cfg.metrics_start, window_end(cfg)}, {0.0, cfg.duration}};
  const char* names[2] = {"metrics", "full"};
  for (int w = 0; w < 2; ++w) {
    const auto stats = amsim::log_stats(log, windows[w][0], windows[w][1]);
    for (int c = 0; c < 6; ++c) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%.9e,%.9e,%.9e\n", names[w],
                    amsim::kChannelNames[c], stats[c].mean, stats[c].max, stats[c].rmse);
      ss << buf;
    }
  }
  return ss.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
  const std::string start = utc_now();
  const LoadedConfig lc = load(config_path, seed);
  const amsim::TrajectoryLog log = amsim::run_scenario(lc.cfg);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  std::vector<std::string> outputs;
  write_file(dir / "log.csv", log_csv(log));
  outputs.push_back((dir / "log.csv").string());
  if (log.diverged) {
    std::cerr << "divergence at t = " << log.divergence_time << " s: " << log.diagnostic
              << "\n";
    write_manifest(dir / "manifest.json", lc, start, outputs, "diverged");
    return kDiverged;
  }
  write_file(dir / "summary.csv", summary_csv(log, lc.cfg));
  outputs.push_back((dir / "summary.csv").string());
  outputs.push_back((dir / "manifest.json").string());
  write_manifest(dir / "manifest.json", lc, start, outputs, "ok");
  std::cout << "controller " << log.controller << ", " << log.records.size()
            << " samples\n"
            << stats_text(log, lc.cfg.metrics_start, window_end(lc.cfg))
            << stats_text(log, 0.0, lc.cfg.duration);
  return kOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, bool parallel) {
  const std::string start = utc_now();
  const LoadedConfig lc = load(config_path, seed);
  const amsim::ControllerKind kinds[3] = {amsim::ControllerKind::kPid,
                                          amsim::ControllerKind::kPidFf,
                                          amsim::ControllerKind::kAnnb};
  std::vector<amsim::TrajectoryLog> logs(3);
  auto run = [&](int i) {
    amsim::ScenarioConfig cfg = lc.cfg;
    cfg.controller = kinds[i];
    logs[i] = amsim::run_scenario(cfg);
  };
  if (parallel) {
    std::vector<std::jthread> workers;
    for (int i = 0; i < 3; ++i) workers.emplace_back(run, i);
  } else {
    for (int i = 0; i < 3; ++i) run(i);
  }
  for (const auto& log : logs) {
    if (log.diverged) {
      std::cerr << log.controller << ": divergence at t = " << log.divergence_time
                << " s: " << log.diagnostic << "\n";
      return kDiverged;
    }
  }
  const std::vector<const amsim::TrajectoryLog*> ptrs = {&logs[0], &logs[1], &logs[2]};
  const auto rows = amsim::comparison_table(ptrs, lc.cfg.metrics_start, window_end(lc.cfg));
  const auto rows_full = amsim::comparison_table(ptrs, 0.0, lc.cfg.duration);
  std::cout << "window [" << lc.cfg.metrics_start << ", " << window_end(lc.cfg) << "] s\n";
  amsim::write_comparison_text(rows, std::cout);
  std::cout << "\nfull run [0, " << lc.cfg.duration << "] s\n";
  amsim::write_comparison_text(rows_full, std::cout);
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    ensure_dir(dir);
    std::vector<std::string> outputs;
    std::ostringstream a, b;
    amsim::write_comparison_csv(rows, a);
    amsim::write_comparison_csv(rows_full, b);
    write_file(dir / "comparison.csv", a.str());
    write_file(dir / "comparison_full.csv", b.str());
    outputs.push_back((dir / "comparison.csv").string());
    outputs.push_back((dir / "comparison_full.csv").string());
    for (const auto& log : logs) {
      const fs::path p = dir / ("log_" + log.controller + ".csv");
      write_file(p, log_csv(log));
      outputs.push_back(p.string());
    }
    outputs.push_back((dir / "manifest.json").string());
    write_manifest(dir / "manifest.json", lc, start, outputs, "ok");
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& config_path,
               const std::string& out_dir, std::optional<std::uint64_t> seed) {
  if (!amsim::is_known_suite(suite)) {
    std::cerr << "unknown suite '" << suite
              << "' (expected kinematics, inertia, dynamics, disturbance or all)\n";
    return kUsage;
  }
  const LoadedConfig lc = load(config_path, seed);
  amsim::VerifyOptions opt;
  opt.seed = lc.cfg.seed;
  std::ofstream csv;
  if (!out_dir.empty() && (suite == "disturbance" || suite == "all")) {
    ensure_dir(out_dir);
    csv.open(fs::path(out_dir) / "disturbance.csv", std::ios::binary);
    if (!csv) throw OutputError(out_dir + "/disturbance.csv: cannot open");
    opt.disturbance_csv = &csv;
  }
  const auto checks = amsim::run_verify(suite, lc.cfg.model, opt);
  amsim::print_checks(checks, std::cout);
  int failed = 0;
  for (const auto& c : checks) failed += c.pass ? 0 : 1;
  std::cout << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kOk : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial manipulator simulation and controller benchmark"};
  app.require_subcommand(0, 1);
  bool print_default = false;
  std::optional<std::uint64_t> seed;
  app.add_flag("--print-default-config", print_default,
               "Print the full default configuration as JSON and exit");
  app.add_option("--seed", seed, "Override the configured seed");
  app.set_version_flag("--version", AMSIM_VERSION);

  std::string config_path, out_dir = "out", suite = "all";
  std::string compare_out, verify_out;
  bool sequential = false;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario");
  simulate->add_option("--config", config_path, "JSON config (defaults if omitted)");
  simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
  simulate->add_option("--seed", seed, "Override the configured seed");

  CLI::App* compare = app.add_subcommand("compare", "Run pid, pid_ff and annb and tabulate errors");
  compare->add_option("--config", config_path, "JSON config (defaults if omitted)");
  compare->add_option("--out", compare_out, "Directory for CSV tables and logs");
  compare->add_flag("--sequential", sequential, "Run the three scenarios one after another");
  compare->add_option("--seed", seed, "Override the configured seed");

  CLI::App* verify = app.add_subcommand("verify", "Run model verification checks");
  verify->add_option("--suite", suite,
                     "kinematics, inertia, dynamics, disturbance or all")
      ->capture_default_str();
  verify->add_option("--config", config_path, "JSON config (defaults if omitted)");
  verify->add_option("--out", verify_out, "Directory for the disturbance CSV");
  verify->add_option("--seed", seed, "Override the configured seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (print_default) {
      std::cout << amsim::default_config_json();
      return kOk;
    }
    if (*simulate) return cmd_simulate(config_path, out_dir, seed);
    if (*compare) return cmd_compare(config_path, compare_out, seed, !sequential);
    if (*verify) return cmd_verify(suite, config_path, verify_out, seed);
    std::cout << app.help();
    return kUsage;
  } catch (const amsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kOutputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}
