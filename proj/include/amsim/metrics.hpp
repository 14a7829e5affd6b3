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

// Tracking-error statistics and the mean absolute percentage error.

#ifndef AMSIM_METRICS_HPP_
#define AMSIM_METRICS_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "amsim/scenario.hpp"

namespace amsim {

struct ChannelStats {
  double mean = 0.0;  // mean |e|
  double max = 0.0;   // max |e|
  double rmse = 0.0;  // sqrt(mean e^2)
};

// Throws std::invalid_argument on an empty series.
ChannelStats channel_stats(std::span<const double> errors);

struct MapeResult {
  double percent = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // samples with |truth| < floor
};

// (100 / N) Σ |(estimate - truth) / truth| over samples with |truth| >= floor.
// Throws std::invalid_argument on length mismatch, floor <= 0, or when every
// sample is excluded.
MapeResult mape(std::span<const double> estimate, std::span<const double> truth,
                double floor);

// mape with floor = fraction * max |truth|.
MapeResult mape_relative_floor(std::span<const double> estimate,
                               std::span<const double> truth,
                               double fraction = 0.01);

inline constexpr std::array<const char*, 6> kChannelNames{
    "X", "Y", "Z", "phi", "theta", "psi"};

// Per-channel errors of a log: position minus reference, Euler angles minus
// the commanded attitude (yaw wrapped), restricted to t in [t0, t1].
std::array<std::vector<double>, 6> tracking_errors(const TrajectoryLog& log,
                                                   double t0, double t1);

std::array<ChannelStats, 6> log_stats(const TrajectoryLog& log, double t0,
                                      double t1);

struct ComparisonRow {
  std::string channel;
  std::string controller;
  ChannelStats stats;
};

// Rows grouped by channel, then by controller in the given order.
std::vector<ComparisonRow> comparison_table(
    const std::vector<const TrajectoryLog*>& logs, double t0, double t1);

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          std::ostream& out);
void write_comparison_text(const std::vector<ComparisonRow>& rows,
                           std::ostream& out);

}  // namespace amsim

#endif  // AMSIM_METRICS_HPP_
