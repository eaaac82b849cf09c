// Copyright 2026 The fedslice Authors. All rights reserved.
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

#include "fedslice/metrics_io.h"

#include <charconv>
#include <ostream>

namespace fedslice {
namespace {

const std::string& slice_name(const ScenarioConfig& cfg, int slice_id) {
  return cfg.slices.at(slice_id).name;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_metrics_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m) {
  out << "episode,slice,strategy,mean_reward,dropped_fraction,offered_bits,served_bits,"
         "mean_latency_ms\n";
  for (const auto& row : m.episodes) {
    out << row.episode << ',' << slice_name(cfg, row.slice_id) << ',' << to_string(m.strategy)
        << ',' << format_double(row.mean_reward()) << ','
        << format_double(row.dropped_fraction()) << ',' << row.offered_bits << ','
        << row.served_bits << ',' << format_double(row.mean_latency_ms()) << '\n';
  }
}

void write_overhead_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m) {
  out << "episode,slice,strategy,uplink_bytes,downlink_bytes\n";
  for (const auto& r : m.overhead) {
    out << r.episode_index << ',' << slice_name(cfg, r.slice_id) << ',' << to_string(r.strategy)
        << ',' << r.uplink_bytes << ',' << r.downlink_bytes << '\n';
  }
}

void write_latency_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m) {
  out << "slice,latency_ms\n";
  for (const auto& [slice, samples] : m.latency_samples) {
    const auto& name = slice_name(cfg, slice);
    for (double v : samples) out << name << ',' << format_double(v) << '\n';
  }
}

void write_cluster_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m) {
  out << "episode,slice,bs_id,label\n";
  for (const auto& c : m.clusters) {
    for (std::size_t b = 0; b < c.labels.size(); ++b) {
      out << c.episode << ',' << slice_name(cfg, c.slice_id) << ','
          << cfg.base_stations[b].id << ',' << c.labels[b] << '\n';
    }
  }
}

}  // namespace fedslice
