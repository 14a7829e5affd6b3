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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / ("amsim_cli_" + std::string(info->name()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Result {
  int code;
  std::string output;
};

Result run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(AMSIM_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kShortRun = R"({"scenario": {"duration": 2.0, "metrics_start": 1.0}})";

TEST(Cli, PrintDefaultConfig) {
  TempDir d;
  const Result r = run("--print-default-config", d.path());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("\"backstepping\""), std::string::npos);
}

TEST(Cli, SimulateWritesFiles) {
  TempDir d;
  write(d.path() / "c.json", kShortRun);
  const Result r = run("simulate --config " + (d.path() / "c.json").string() + " --out " +
                           (d.path() / "out").string(),
                       d.path());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(d.path() / "out" / "log.csv"));
  EXPECT_TRUE(fs::exists(d.path() / "out" / "summary.csv"));
  EXPECT_NE(slurp(d.path() / "out" / "manifest.json").find("fnv1a64:"), std::string::npos);
  EXPECT_NE(r.output.find("Mean"), std::string::npos);
}

TEST(Cli, SameConfigTwiceGivesIdenticalLogs) {
  TempDir d;
  write(d.path() / "c.json", kShortRun);
  for (const char* sub : {"a", "b"}) {
    const Result r = run("simulate --config " + (d.path() / "c.json").string() + " --out " +
                             (d.path() / sub).string(),
                         d.path());
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(slurp(d.path() / "a" / "log.csv"), slurp(d.path() / "b" / "log.csv"));
}

TEST(Cli, UnknownKeyIsConfigError) {
  TempDir d;
  write(d.path() / "bad.json", R"({"scenario": {"durration": 2}})");
  const Result r = run("simulate --config " + (d.path() / "bad.json").string() + " --out " +
                           (d.path() / "out").string(),
                       d.path());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find("scenario.durration"), std::string::npos) << r.output;
}

TEST(Cli, UnknownSuiteIsUsageError) {
  TempDir d;
  const Result r = run("verify --suite nope", d.path());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("nope"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  TempDir d;
  EXPECT_EQ(run("bogus", d.path()).code, 2);
}

TEST(Cli, UnwritableOutputIsOutputError) {
  TempDir d;
  write(d.path() / "c.json", kShortRun);
  write(d.path() / "file", "x");
  const Result r = run("simulate --config " + (d.path() / "c.json").string() + " --out " +
                           (d.path() / "file" / "sub").string(),
                       d.path());
  EXPECT_EQ(r.code, 5) << r.output;
}

TEST(Cli, VerifyKinematicsPasses) {
  TempDir d;
  const Result r = run("verify --suite kinematics", d.path());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(r.output.find("[FAIL]"), std::string::npos);
}

}  // namespace
