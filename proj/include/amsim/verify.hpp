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

// Executable model checks: finite-difference, momentum and re-substitution
// oracles for the kinematics, inertia, dynamics and disturbance code.

#ifndef AMSIM_VERIFY_HPP_
#define AMSIM_VERIFY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "amsim/dynamics.hpp"

namespace amsim {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int samples = 100;
  // When non-null, the disturbance suite writes (truth, feedforward) wrench
  // traces here.
  std::ostream* disturbance_csv = nullptr;
};

bool is_known_suite(const std::string& suite);

// suite is one of kinematics, inertia, dynamics, disturbance, all.
// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_verify(const std::string& suite,
                                    const PlantModel& model,
                                    const VerifyOptions& options = {});

void print_checks(const std::vector<CheckResult>& checks, std::ostream& out);

}  // namespace amsim

#endif  // AMSIM_VERIFY_HPP_
