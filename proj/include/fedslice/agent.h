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

#ifndef FEDSLICE_AGENT_H_
#define FEDSLICE_AGENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fedslice/domain.h"
#include "fedslice/neural.h"
#include "fedslice/rng.h"

namespace fedslice {

// Raw local observation of one slice agent at one BS.
struct AgentState {
  double snr_db = 0.0;
  double offered_bits = 0.0;
  int spare_prbs = 0;
};

inline constexpr std::size_t kStateDim = 3;
using StateVector = std::array<double, kStateDim>;

// (snr/40, offered/demand_scale, spare/capacity), each clamped to [0, 2].
StateVector build_state(const AgentState& raw, int bs_capacity, double demand_scale);

// {0, chunk, 2*chunk, ..., capacity}.
std::vector<int> action_space(int bs_capacity, int chunk);

// Epsilon-greedy; greedy ties go to the lowest index.
std::size_t select_action(std::span<const double> q_values, double epsilon, Rng& rng);
// Same, but exploratory draws are limited to the first `explore_count`
// actions. The greedy branch still ranges over every action.
std::size_t select_action(std::span<const double> q_values, double epsilon,
                          std::size_t explore_count, Rng& rng);

// Piecewise reward of the allocation gap alpha (bits) with rho_up > 0 and
// rho_low = -rho_up / 2. In normalized mode the outer branches are divided
// by rho_up; the middle branch is (1 - x) x with x = alpha / rho_up.
double reward_from_gap(double alpha, double rho_up, RewardMode mode,
                       LowerBranch lower = LowerBranch::kMagnitude);

// alpha = Gamma(alloc) * interval - offered; rho_up = 2 Gamma(chunk) * interval.
double compute_reward(int alloc_prbs, double snr_db, double offered_bits, int chunk,
                      double interval_s, RewardMode mode = RewardMode::kNormalized,
                      LowerBranch lower = LowerBranch::kMagnitude);

// -eta when the proposal exceeds the spare PRBs, otherwise `reward_in`.
double apply_penalty(int proposed_prbs, int spare_prbs, double eta, double reward_in);

// Largest multiple of `chunk` not above min(proposed, spare).
int clip_allocation(int proposed_prbs, int spare_prbs, int chunk);

struct Transition {
  StateVector state{};
  std::size_t action = 0;
  double reward = 0.0;
  StateVector next_state{};
};

class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, Rng rng);

  void push(const Transition& t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_[i]; }

  // Distinct indices, uniformly chosen (Floyd's algorithm).
  std::vector<std::size_t> sample_indices(std::size_t batch);

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
  Rng rng_;
};

struct AgentNet {
  ModelParams online;
  ModelParams target;
  OptState opt;
  double epsilon = 1.0;
  // Reward accumulated since the last federation round.
  double cumulative_reward = 0.0;

  static AgentNet create(std::vector<int> layer_sizes, double epsilon, Rng& rng);
  // Installs federated parameters as both networks and clears Adam moments.
  void replace_model(const ModelParams& params);
};

struct TrainOptions {
  std::size_t batch_size = 32;
  double gamma = 0.99;
  double learning_rate = 0.001;
  bool double_q = true;
  Optimizer optimizer = Optimizer::kAdam;
};

// Bootstrapped target for one transition: r + gamma * Q_target(s', argmax
// Q_online(s')) for DDQN, r + gamma * max Q_online(s') otherwise.
double td_target(const AgentNet& net, const Transition& t, double gamma, bool double_q);

// One optimizer step on a sampled batch. Returns the batch mean squared TD
// error, or nullopt (and does nothing) while the buffer is too small.
std::optional<double> train_step(AgentNet& net, ReplayBuffer& buffer,
                                 const TrainOptions& options);

void sync_target(AgentNet& net);

struct EpsilonSchedule {
  double start = 1.0;
  double floor = 0.02;
  int total_episodes = 200;
  double floor_fraction = 0.5;
};

// Exponential decay from `start` reaching `floor` at floor_fraction *
// total_episodes, held afterwards.
double epsilon_at(int episode, const EpsilonSchedule& schedule);
void decay_epsilon(AgentNet& net, int episode, const EpsilonSchedule& schedule);

// Running 95th percentile of the offered bits seen over a sliding window.
class DemandScale {
 public:
  explicit DemandScale(std::size_t window) : window_(window) {}
  void observe(double offered_bits);
  // Falls back to `current` (at least 1) before any observation.
  double value(double current) const;

 private:
  std::size_t window_;
  std::deque<double> history_;
};

// Agent checkpoint: the online network in model checkpoint format followed
// by an 8-byte trailer (float32 epsilon, uint32 episode index).
void save_agent_checkpoint(std::ostream& out, const AgentNet& net, std::uint32_t episode);
AgentNet load_agent_checkpoint(std::istream& in, std::uint32_t* episode = nullptr);

}  // namespace fedslice

#endif  // FEDSLICE_AGENT_H_
