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

#include "fedslice/agent.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "fedslice/env.h"

namespace fedslice {

StateVector build_state(const AgentState& raw, int bs_capacity, double demand_scale) {
  auto clamp2 = [](double v) { return std::clamp(v, 0.0, 2.0); };
  const double scale = demand_scale > 0.0 ? demand_scale : 1.0;
  return {clamp2(raw.snr_db / 40.0), clamp2(raw.offered_bits / scale),
          clamp2(static_cast<double>(raw.spare_prbs) / bs_capacity)};
}

std::vector<int> action_space(int bs_capacity, int chunk) {
  std::vector<int> actions;
  for (int prbs = 0; prbs <= bs_capacity; prbs += chunk) actions.push_back(prbs);
  return actions;
}

std::size_t select_action(std::span<const double> q_values, double epsilon, Rng& rng) {
  return select_action(q_values, epsilon, q_values.size(), rng);
}

std::size_t select_action(std::span<const double> q_values, double epsilon,
                          std::size_t explore_count, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (epsilon > 0.0 && unit(rng) < epsilon) {
    const std::size_t n = std::clamp<std::size_t>(explore_count, 1, q_values.size());
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    return pick(rng);
  }
  return static_cast<std::size_t>(
      std::max_element(q_values.begin(), q_values.end()) - q_values.begin());
}

double reward_from_gap(double alpha, double rho_up, RewardMode mode, LowerBranch lower) {
  const double rho_low = -0.5 * rho_up;
  const double scale = mode == RewardMode::kNormalized ? rho_up : 1.0;
  if (alpha < rho_low) {
    const double offset = lower == LowerBranch::kPrinted ? -4.0 * rho_low : 4.0 * rho_low;
    return (alpha + offset) / scale;
  }
  if (alpha > rho_up) return -(alpha - rho_up) / scale;
  const double x = alpha / rho_up;
  return (1.0 - x) * x;
}

double compute_reward(int alloc_prbs, double snr_db, double offered_bits, int chunk,
                      double interval_s, RewardMode mode, LowerBranch lower) {
  const double alpha = prb_throughput(alloc_prbs, snr_db) * interval_s - offered_bits;
  const double rho_up = 2.0 * prb_throughput(chunk, snr_db) * interval_s;
  return reward_from_gap(alpha, rho_up, mode, lower);
}

double apply_penalty(int proposed_prbs, int spare_prbs, double eta, double reward_in) {
  return proposed_prbs > spare_prbs ? -eta : reward_in;
}

int clip_allocation(int proposed_prbs, int spare_prbs, int chunk) {
  const int limit = std::max(0, std::min(proposed_prbs, spare_prbs));
  return limit / chunk * chunk;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, Rng rng)
    : capacity_(capacity), rng_(std::move(rng)) {
  items_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
  } else {
    items_[next_] = t;
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch) {
  const std::size_t n = items_.size();
  batch = std::min(batch, n);
  std::vector<std::size_t> chosen;
  chosen.reserve(batch);
  for (std::size_t j = n - batch; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t k = pick(rng_);
    if (std::find(chosen.begin(), chosen.end(), k) == chosen.end()) {
      chosen.push_back(k);
    } else {
      chosen.push_back(j);
    }
  }
  return chosen;
}

AgentNet AgentNet::create(std::vector<int> layer_sizes, double epsilon, Rng& rng) {
  AgentNet net;
  net.online = init_params(std::move(layer_sizes), rng);
  net.target = net.online;
  net.opt = OptState::zeros(net.online.values.size());
  net.epsilon = epsilon;
  return net;
}

void AgentNet::replace_model(const ModelParams& params) {
  if (!params.same_shape(online)) throw DimensionError("federated model shape mismatch");
  online = params;
  target = params;
  opt = OptState::zeros(params.values.size());
}

double td_target(const AgentNet& net, const Transition& t, double gamma, bool double_q) {
  const auto q_next = forward(net.online, t.next_state);
  double bootstrap;
  if (double_q) {
    const auto best = static_cast<std::size_t>(
        std::max_element(q_next.begin(), q_next.end()) - q_next.begin());
    bootstrap = forward(net.target, t.next_state)[best];
  } else {
    bootstrap = *std::max_element(q_next.begin(), q_next.end());
  }
  return t.reward + gamma * bootstrap;
}

std::optional<double> train_step(AgentNet& net, ReplayBuffer& buffer,
                                 const TrainOptions& options) {
  if (options.batch_size == 0 || buffer.size() < options.batch_size) return std::nullopt;
  const auto batch = buffer.sample_indices(options.batch_size);
  const double scale = 1.0 / static_cast<double>(batch.size());

  std::vector<double> grad(net.online.values.size(), 0.0);
  double loss = 0.0;
  for (std::size_t idx : batch) {
    const Transition& t = buffer[idx];
    const double y = td_target(net, t, options.gamma, options.double_q);
    const double q = accumulate_gradient(net.online, t.state, t.action, y, scale, grad);
    loss += (y - q) * (y - q);
  }
  if (options.optimizer == Optimizer::kAdam) {
    adam_update(net.online, grad, net.opt, options.learning_rate);
  } else {
    sgd_update(net.online, grad, options.learning_rate);
  }
  return loss * scale;
}

void sync_target(AgentNet& net) { net.target = net.online; }

double epsilon_at(int episode, const EpsilonSchedule& s) {
  if (episode <= 0 || s.start <= s.floor) return s.start;
  const double horizon = s.floor_fraction * s.total_episodes;
  if (episode >= horizon) return s.floor;
  const double progress = episode / horizon;
  // A zero floor cannot be reached exponentially; decay linearly instead.
  if (s.floor <= 0.0) return s.start * (1.0 - progress);
  return s.start * std::pow(s.floor / s.start, progress);
}

void decay_epsilon(AgentNet& net, int episode, const EpsilonSchedule& schedule) {
  net.epsilon = epsilon_at(episode, schedule);
}

void DemandScale::observe(double offered_bits) {
  history_.push_back(offered_bits);
  if (history_.size() > window_) history_.pop_front();
}

double DemandScale::value(double current) const {
  if (history_.empty()) return std::max(current, 1.0);
  std::vector<double> sorted(history_.begin(), history_.end());
  const auto k = static_cast<std::size_t>(std::ceil(0.95 * sorted.size())) - 1;
  std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
  return std::max(sorted[k], 1.0);
}

void save_agent_checkpoint(std::ostream& out, const AgentNet& net, std::uint32_t episode) {
  save_checkpoint(out, net.online);
  write_f32(out, static_cast<float>(net.epsilon));
  write_u32(out, episode);
  if (!out) throw std::runtime_error("failed to write agent checkpoint");
}

AgentNet load_agent_checkpoint(std::istream& in, std::uint32_t* episode) {
  AgentNet net;
  net.online = load_checkpoint(in);
  net.target = net.online;
  net.opt = OptState::zeros(net.online.values.size());
  net.epsilon = read_f32(in);
  const std::uint32_t ep = read_u32(in);
  if (episode) *episode = ep;
  return net;
}

}  // namespace fedslice
