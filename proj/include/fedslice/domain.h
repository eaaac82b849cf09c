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

#ifndef FEDSLICE_DOMAIN_H_
#define FEDSLICE_DOMAIN_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fedslice {

enum class Strategy { kFdrl, kFullCluster, kRandomRep, kBestRep, kNoFederation };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);

enum class Optimizer { kAdam, kSgd };
enum class RewardMode { kNormalized, kLiteral };
// Under-provisioning branch of the reward: kMagnitude uses alpha - 4|rho_low|
// (monotone in alpha), kPrinted uses alpha - 4 rho_low.
enum class LowerBranch { kMagnitude, kPrinted };
// Divisor of offered bits in the agent state: the running 95th percentile
// of the agent's own demand, or the BS capacity in bits per interval at
// the mean SNR.
enum class StateScale { kPercentile, kCapacity };

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

// Per-slice SLA and agent constants. Lower priority decides earlier.
struct SliceSpec {
  int id = 0;
  std::string name;
  double latency_bound_ms = 10.0;
  double penalty_coeff = 100.0;
  int chunk_prbs = 10;
  int priority = 0;
  // Traffic knobs: fraction of the user population subscribed to this
  // slice and the per-user Poisson mean in demand units per interval.
  double user_share = 1.0 / 3.0;
  double mean_demand_units = 1.0;
  // When set, every BS offers exactly this many bits per interval.
  std::optional<std::int64_t> constant_offered_bits;
  bool operator==(const SliceSpec&) const = default;
};

struct BaseStation {
  int id = 0;
  int capacity_prbs = 100;
  Position position;
  // Index into TrafficConfig::profiles (diurnal shape of the area).
  int profile = 0;
  // Attractiveness used by the mobility model when users explore.
  double relevance = 1.0;
  bool operator==(const BaseStation&) const = default;
};

struct DiurnalProfile {
  std::string name;
  double peak_hour = 12.0;
  bool operator==(const DiurnalProfile&) const = default;
};

struct TrafficConfig {
  int n_users = 500;
  double unit_bits = 1.0e6;
  double snr_mean_db = 25.0;
  bool rayleigh_fading = true;
  double start_hour = 0.0;
  std::vector<DiurnalProfile> profiles = {{"residential", 20.0},
                                          {"business", 11.0},
                                          {"mixed", 15.5}};
  // Users move once every this many decision intervals.
  int mobility_period_intervals = 15;
  double p_new = 0.6;
  double gamma_epr = 0.21;
  bool operator==(const TrafficConfig&) const = default;
};

struct ClusteringConfig {
  double eps_d = 0.06;
  int n_min = 2;
  int dtw_window_samples = 240;
  int lookback_intervals = 1440;
  bool operator==(const ClusteringConfig&) const = default;
};

struct LearningConfig {
  double gamma = 0.99;
  double learning_rate = 0.001;
  int buffer_size = 20000;
  int batch_size = 32;
  double epsilon_start = 1.0;
  double epsilon_floor = 0.02;
  // Fraction of total_episodes at which epsilon reaches its floor.
  double epsilon_floor_fraction = 0.5;
  std::vector<int> hidden_layers = {24, 24};
  Optimizer optimizer = Optimizer::kAdam;
  bool double_q = true;
  RewardMode reward_mode = RewardMode::kNormalized;
  LowerBranch lower_branch = LowerBranch::kPrinted;
  int train_steps_per_interval = 1;
  StateScale state_scale = StateScale::kPercentile;
  // Exploratory actions only propose allocations that fit the spare PRBs.
  bool explore_feasible = false;
  bool operator==(const LearningConfig&) const = default;
};

struct ScenarioConfig {
  std::vector<BaseStation> base_stations;
  std::vector<SliceSpec> slices;
  double decision_interval_s = 60.0;
  double sub_slot_s = 1.0;
  int epochs_per_episode = 5;
  int federation_period_episodes = 5;
  int total_episodes = 200;
  Strategy strategy = Strategy::kFullCluster;
  // Keeps the 1/|cluster| prefactor of the printed Full-Cluster rule.
  bool full_cluster_literal = false;
  ClusteringConfig clustering;
  std::uint64_t rng_seed = 1;
  TrafficConfig traffic;
  LearningConfig learning;
  int num_threads = 1;
  bool operator==(const ScenarioConfig&) const = default;
};

struct AllocationDecision {
  int slice_id = 0;
  int bs_id = 0;
  int prbs = 0;
  std::int64_t interval_index = 0;
};

struct ConfigIssue {
  std::string path;
  std::string message;
  bool operator==(const ConfigIssue&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// Returns every violated invariant; empty means the config is valid.
std::vector<ConfigIssue> validate_config(const ScenarioConfig& cfg);

// Throws ConfigError listing all issues.
const ScenarioConfig& require_valid(const ScenarioConfig& cfg);

// Slices sorted by ascending priority (decision order within a BS).
std::vector<int> priority_order(const ScenarioConfig& cfg);

// Three slices (URLLC, eMBB, mMTC) with latency bounds 10/40/20 ms,
// penalty 100, chunk 10 PRBs, and `n_bs` base stations of 100 PRBs laid
// out on a jittered grid.
ScenarioConfig default_scenario(int n_bs = 8, std::uint64_t seed = 1);

// Places `n_bs` stations on a jittered square grid spanning `area_m`,
// cycling through `n_profiles` diurnal profiles.
std::vector<BaseStation> generate_layout(int n_bs, int capacity_prbs,
                                         double area_m, int n_profiles,
                                         std::uint64_t seed);

}  // namespace fedslice

#endif  // FEDSLICE_DOMAIN_H_
