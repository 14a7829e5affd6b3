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

#include "amsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "amsim/controllers.hpp"

namespace amsim {

ChannelStats channel_stats(std::span<const double> errors) {
  if (errors.empty()) throw std::invalid_argument("channel_stats: empty series");
  ChannelStats s;
  double sum_abs = 0.0, sum_sq = 0.0;
  for (double e : errors) {
    const double a = std::abs(e);
    sum_abs += a;
    sum_sq += e * e;
    s.max = std::max(s.max, a);
  }
  const double n = static_cast<double>(errors.size());
  s.mean = sum_abs / n;
  s.rmse = std::sqrt(sum_sq / n);
  return s;
}

MapeResult mape(std::span<const double> estimate, std::span<const double> truth,
                double floor) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("mape: series lengths differ");
  }
  if (!(floor > 0.0)) throw std::invalid_argument("mape: floor must be > 0");
  MapeResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::abs(truth[i]) < floor) {
      ++r.excluded;
      continue;
    }
    sum += std::abs((estimate[i] - truth[i]) / truth[i]);
    ++r.used;
  }
  if (r.used == 0) throw std::invalid_argument("mape: every sample is below the floor");
  r.percent = 100.0 * sum / static_cast<double>(r.used);
  return r;
}

MapeResult mape_relative_floor(std::span<const double> estimate,
                               std::span<const double> truth, double fraction) {
  double peak = 0.0;
  for (double v : truth) peak = std::max(peak, std::abs(v));
  return mape(estimate, truth, fraction * peak);
}

std::array<std::vector<double>, 6> tracking_errors(const TrajectoryLog& log,
                                                   double t0, double t1) {
  std::array<std::vector<double>, 6> e;
  for (const LogRecord& r : log.records) {
    if (r.t < t0 - 1e-9 || r.t > t1 + 1e-9) continue;
    for (int i = 0; i < 3; ++i) {
      e[i].push_back(r.state.position[i] - r.reference.position[i]);
    }
    e[3].push_back(r.state.euler.x() - r.attitude_cmd.x());
    e[4].push_back(r.state.euler.y() - r.attitude_cmd.y());
    e[5].push_back(wrap_angle(r.state.euler.z() - r.attitude_cmd.z()));
  }
  return e;
}

std::array<ChannelStats, 6> log_stats(const TrajectoryLog& log, double t0,
                                      double t1) {
  const auto e = tracking_errors(log, t0, t1);
  std::array<ChannelStats, 6> s;
  for (int i = 0; i < 6; ++i) s[i] = channel_stats(e[i]);
  return s;
}

std::vector<ComparisonRow> comparison_table(
    const std::vector<const TrajectoryLog*>& logs, double t0, double t1) {
  std::vector<std::array<ChannelStats, 6>> stats;
  for (const TrajectoryLog* log : logs) stats.push_back(log_stats(*log, t0, t1));
  std::vector<ComparisonRow> rows;
  for (int c = 0; c < 6; ++c) {
    for (std::size_t k = 0; k < logs.size(); ++k) {
      rows.push_back({kChannelNames[c], logs[k]->controller, stats[k][c]});
    }
  }
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          std::ostream& out) {
  out << "channel,controller,mean,max,rmse\n";
  char buf[128];
  for (const ComparisonRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9e,%.9e,%.9e", r.stats.mean, r.stats.max,
                  r.stats.rmse);
    out << r.channel << ',' << r.controller << ',' << buf << '\n';
  }
}

void write_comparison_text(const std::vector<ComparisonRow>& rows,
                           std::ostream& out) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %-8s %14s %14s %14s\n", "Channel",
                "Method", "Mean", "Maximum", "RMSE");
  out << buf;
  for (const ComparisonRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-8s %-8s %14.6f %14.6f %14.6f\n",
                  r.channel.c_str(), r.controller.c_str(), r.stats.mean,
                  r.stats.max, r.stats.rmse);
    out << buf;
  }
}

}  // namespace amsim
