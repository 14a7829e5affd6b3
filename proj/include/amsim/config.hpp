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

// JSON scenario configuration. A config file is a partial document: every
// key it names overrides the default, keys it omits keep their defaults.
// Unknown keys and type mismatches are errors that name the key path.

#ifndef AMSIM_CONFIG_HPP_
#define AMSIM_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "amsim/scenario.hpp"

namespace amsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates a config document. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

// Full document for a config, including every default.
std::string config_to_json(const ScenarioConfig& cfg);
std::string default_config_json();

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace amsim

#endif  // AMSIM_CONFIG_HPP_
