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

#ifndef FEDSLICE_SIMULATION_H_
#define FEDSLICE_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "fedslice/agent.h"
#include "fedslice/clustering.h"
#include "fedslice/domain.h"
#include "fedslice/env.h"
#include "fedslice/federation.h"
#include "fedslice/mobility.h"

namespace fedslice {

struct EpisodeSliceMetrics {
  int episode = 0;
  int slice_id = 0;
  double reward_sum = 0.0;
  std::int64_t decisions = 0;
  std::int64_t offered_bits = 0;
  std::int64_t served_bits = 0;
  std::int64_t dropped_bits = 0;
  // Served-bit weighted latency sum, in ms * bits.
  double latency_bit_ms = 0.0;

  double mean_reward() const;
  // dropped / offered, capped at 1 (traffic carried over from the previous
  // episode can be dropped in this one); 0 when nothing was offered.
  double dropped_fraction() const;
  double mean_latency_ms() const;
};

struct ClusterSummary {
  int episode = 0;
  int slice_id = 0;
  int n_clusters = 0;
  int noise = 0;
  std::vector<int> labels;  // per BS index
};

struct SimulationMetrics {
  Strategy strategy = Strategy::kFullCluster;
  // Ordered by episode, then slice id.
  std::vector<EpisodeSliceMetrics> episodes;
  std::vector<OverheadRecord> overhead;
  std::vector<ClusterSummary> clusters;
  // Reservoir of per-sub-slot served latencies, keyed by slice id.
  std::map<int, std::vector<double>> latency_samples;
};

// Everything that happened at one BS in one decision interval. Vectors are
// indexed by slice id.
struct IntervalRecord {
  std::int64_t interval_index = 0;
  int bs_index = 0;
  int capacity_prbs = 0;
  std::vector<int> proposed_prbs;
  std::vector<int> enforced_prbs;
  std::vector<int> spare_prbs;
  std::vector<double> rewards;
  std::vector<IntervalOutcome> outcomes;
};

using IntervalObserver = std::function<void(const IntervalRecord&)>;

inline constexpr std::size_t kLatencyReservoirSize = 100000;

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Called once per BS per interval, in BS order, on the calling thread.
  void set_interval_observer(IntervalObserver observer);

  // Runs every episode and returns the collected metrics.
  SimulationMetrics run();

  // Single steps, for callers that drive the loop themselves. `run` is
  // run_decision_interval for every interval plus end_episode.
  void run_decision_interval(std::int64_t interval_index);
  void end_episode(int episode);
  void run_federation_episode(int episode);

  const ScenarioConfig& config() const { return cfg_; }
  const SimulationMetrics& metrics() const { return metrics_; }
  AgentNet& agent(int slice_id, int bs_index);
  const AgentNet& agent(int slice_id, int bs_index) const;

 private:
  struct BsState;
  struct SliceResult;

  void process_bs(int b, std::int64_t t, std::vector<SliceResult>& out);
  void record_interval(int episode, const std::vector<std::vector<SliceResult>>& results);
  void add_latency_sample(int slice_id, double latency_ms);

  ScenarioConfig cfg_;
  std::vector<int> order_;
  EpsilonSchedule schedule_;
  TrainOptions train_options_;
  MobilityTrace trace_;
  std::vector<std::unique_ptr<BsState>> bs_;
  Rng federation_rng_;
  Rng reservoir_rng_;
  std::map<int, std::uint64_t> reservoir_seen_;
  SimulationMetrics metrics_;
  IntervalObserver observer_;
  std::size_t model_bytes_ = 0;
};

SimulationMetrics run_simulation(const ScenarioConfig& cfg, IntervalObserver observer = {});

}  // namespace fedslice

#endif  // FEDSLICE_SIMULATION_H_
