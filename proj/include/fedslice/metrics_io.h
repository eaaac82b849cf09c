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

#ifndef FEDSLICE_METRICS_IO_H_
#define FEDSLICE_METRICS_IO_H_

#include <iosfwd>
#include <string>

#include "fedslice/domain.h"
#include "fedslice/simulation.h"

namespace fedslice {

// Shortest round-trip decimal form.
std::string format_double(double value);

// episode,slice,strategy,mean_reward,dropped_fraction,offered_bits,served_bits,mean_latency_ms
void write_metrics_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m);
// episode,slice,strategy,uplink_bytes,downlink_bytes
void write_overhead_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m);
// slice,latency_ms
void write_latency_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m);
// episode,slice,bs_id,label
void write_cluster_csv(std::ostream& out, const ScenarioConfig& cfg, const SimulationMetrics& m);

}  // namespace fedslice

#endif  // FEDSLICE_METRICS_IO_H_
