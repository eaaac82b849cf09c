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

#include "fedslice/simulation.h"

#include <algorithm>
#include <exception>
#include <optional>
#include <spdlog/spdlog.h>
#include <stdexcept>
#include <thread>

namespace fedslice {

double EpisodeSliceMetrics::mean_reward() const {
  return decisions > 0 ? reward_sum / static_cast<double>(decisions) : 0.0;
}

double EpisodeSliceMetrics::dropped_fraction() const {
  if (offered_bits <= 0) return 0.0;
  return std::min(1.0, static_cast<double>(dropped_bits) / static_cast<double>(offered_bits));
}

double EpisodeSliceMetrics::mean_latency_ms() const {
  return served_bits > 0 ? latency_bit_ms / static_cast<double>(served_bits) : 0.0;
}

struct Simulation::BsState {
  struct Pending {
    StateVector state{};
    std::size_t action = 0;
    double reward = 0.0;
  };
  struct SliceAgent {
    AgentNet net;
    ReplayBuffer buffer;
    Rng rng;
    DemandScale scale;
    QueueState queue;
    std::optional<Pending> pending;
    std::deque<double> history;
  };

  int index = 0;
  Rng snr_rng;
  Rng demand_rng;
  std::vector<int> actions;
  std::vector<SliceAgent> agents;  // by slice id
};

struct Simulation::SliceResult {
  int proposed = 0;
  int enforced = 0;
  int spare = 0;
  double reward = 0.0;
  IntervalOutcome outcome;
  std::vector<SubSlotLatency> sub_slots;
};

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(require_valid(cfg)),
      order_(priority_order(cfg_)),
      trace_(cfg_, static_cast<std::int64_t>(cfg_.total_episodes) * cfg_.epochs_per_episode),
      federation_rng_(make_stream(cfg_.rng_seed, "federation")),
      reservoir_rng_(make_stream(cfg_.rng_seed, "reservoir")) {
  const auto& l = cfg_.learning;
  schedule_ = {l.epsilon_start, l.epsilon_floor, cfg_.total_episodes, l.epsilon_floor_fraction};
  train_options_ = {static_cast<std::size_t>(l.batch_size), l.gamma, l.learning_rate,
                    l.double_q, l.optimizer};
  metrics_.strategy = cfg_.strategy;

  const double eps0 = epsilon_at(0, schedule_);
  for (const auto& station : cfg_.base_stations) {
    auto st = std::make_unique<BsState>();
    st->index = station.id;
    st->snr_rng = make_stream(cfg_.rng_seed, "snr", station.id);
    st->demand_rng = make_stream(cfg_.rng_seed, "demand", station.id);
    for (const auto& slice : cfg_.slices) {
      const auto actions = action_space(station.capacity_prbs, slice.chunk_prbs);
      std::vector<int> layers{static_cast<int>(kStateDim)};
      layers.insert(layers.end(), l.hidden_layers.begin(), l.hidden_layers.end());
      layers.push_back(static_cast<int>(actions.size()));
      // Every BS starts from the same per-slice model, as if broadcast by
      // the federation layer.
      Rng init_rng = make_stream(cfg_.rng_seed, "agent-init", slice.id);
      AgentNet net = AgentNet::create(layers, eps0, init_rng);
      Rng rng = make_stream(cfg_.rng_seed, "agent", slice.id, station.id);
      st->agents.push_back(BsState::SliceAgent{
          std::move(net),
          ReplayBuffer(static_cast<std::size_t>(l.buffer_size),
                       make_stream(cfg_.rng_seed, "replay", slice.id, station.id)),
          std::move(rng), DemandScale(static_cast<std::size_t>(cfg_.clustering.lookback_intervals)),
          QueueState{}, std::nullopt, {}});
    }
    bs_.push_back(std::move(st));
  }
  if (!bs_.empty() && !cfg_.slices.empty()) model_bytes_ = model_bytes(bs_[0]->agents[0].net.online);
}

Simulation::~Simulation() = default;

void Simulation::set_interval_observer(IntervalObserver observer) {
  observer_ = std::move(observer);
}

AgentNet& Simulation::agent(int slice_id, int bs_index) {
  return bs_.at(bs_index)->agents.at(slice_id).net;
}

const AgentNet& Simulation::agent(int slice_id, int bs_index) const {
  return bs_.at(bs_index)->agents.at(slice_id).net;
}

void Simulation::process_bs(int b, std::int64_t t, std::vector<SliceResult>& out) {
  BsState& st = *bs_[b];
  const BaseStation& station = cfg_.base_stations[b];
  const auto& traffic = cfg_.traffic;
  const double weight =
      temporal_weight(t, cfg_.decision_interval_s, traffic.profiles[station.profile].peak_hour,
                      traffic.start_hour);
  const auto lookback = static_cast<std::size_t>(cfg_.clustering.lookback_intervals);

  out.assign(cfg_.slices.size(), SliceResult{});
  int spare = station.capacity_prbs;
  for (int s : order_) {
    const SliceSpec& slice = cfg_.slices[s];
    auto& ag = st.agents[s];
    SliceResult& res = out[s];

    const std::int64_t offered =
        slice.constant_offered_bits
            ? *slice.constant_offered_bits
            : generate_demand(trace_.users_at(t, s, b), slice, weight, traffic.unit_bits,
                              st.demand_rng);
    const double snr = traffic.rayleigh_fading ? sample_snr(st.snr_rng, traffic.snr_mean_db)
                                               : traffic.snr_mean_db;

    const AgentState raw{snr, static_cast<double>(offered), spare};
    const double scale =
        cfg_.learning.state_scale == StateScale::kCapacity
            ? prb_throughput(station.capacity_prbs, traffic.snr_mean_db) * cfg_.decision_interval_s
            : ag.scale.value(static_cast<double>(offered));
    const StateVector state = build_state(raw, station.capacity_prbs, scale);
    ag.scale.observe(static_cast<double>(offered));
    if (ag.pending)
      ag.buffer.push({ag.pending->state, ag.pending->action, ag.pending->reward, state});

    const auto q = forward(ag.net.online, state);
    const auto actions = action_space(station.capacity_prbs, slice.chunk_prbs);
    const std::size_t explore_count = cfg_.learning.explore_feasible
                                          ? static_cast<std::size_t>(spare / slice.chunk_prbs) + 1
                                          : actions.size();
    const std::size_t action = select_action(q, ag.net.epsilon, explore_count, ag.rng);
    res.proposed = actions[action];
    res.spare = spare;
    res.enforced = clip_allocation(res.proposed, spare, slice.chunk_prbs);

    const AllocationDecision decision{slice.id, station.id, res.enforced, t};
    res.outcome = step_interval(ag.queue, decision, snr, offered, slice, cfg_.decision_interval_s,
                                cfg_.sub_slot_s, &res.sub_slots);
    res.reward = apply_penalty(
        res.proposed, spare, slice.penalty_coeff,
        compute_reward(res.enforced, snr, static_cast<double>(offered), slice.chunk_prbs,
                       cfg_.decision_interval_s, cfg_.learning.reward_mode,
                       cfg_.learning.lower_branch));
    spare -= res.enforced;

    ag.pending = BsState::Pending{state, action, res.reward};
    ag.net.cumulative_reward += res.reward;
    ag.history.push_back(static_cast<double>(offered));
    if (ag.history.size() > lookback) ag.history.pop_front();
    for (int k = 0; k < cfg_.learning.train_steps_per_interval; ++k)
      train_step(ag.net, ag.buffer, train_options_);
  }
}

void Simulation::add_latency_sample(int slice_id, double latency_ms) {
  auto& pool = metrics_.latency_samples[slice_id];
  const std::uint64_t seen = ++reservoir_seen_[slice_id];
  if (pool.size() < kLatencyReservoirSize) {
    pool.push_back(latency_ms);
    return;
  }
  std::uniform_int_distribution<std::uint64_t> pick(0, seen - 1);
  const std::uint64_t j = pick(reservoir_rng_);
  if (j < kLatencyReservoirSize) pool[j] = latency_ms;
}

void Simulation::record_interval(int episode,
                                 const std::vector<std::vector<SliceResult>>& results) {
  const auto n_slices = cfg_.slices.size();
  while (metrics_.episodes.size() < (static_cast<std::size_t>(episode) + 1) * n_slices) {
    EpisodeSliceMetrics row;
    row.episode = static_cast<int>(metrics_.episodes.size() / n_slices);
    row.slice_id = static_cast<int>(metrics_.episodes.size() % n_slices);
    metrics_.episodes.push_back(row);
  }
  for (std::size_t b = 0; b < results.size(); ++b) {
    for (std::size_t s = 0; s < n_slices; ++s) {
      const SliceResult& r = results[b][s];
      auto& row = metrics_.episodes[episode * n_slices + s];
      row.reward_sum += r.reward;
      ++row.decisions;
      row.offered_bits += r.outcome.offered_bits;
      row.served_bits += r.outcome.served_bits;
      row.dropped_bits += r.outcome.dropped_bits;
      row.latency_bit_ms += r.outcome.mean_latency_ms * static_cast<double>(r.outcome.served_bits);
      for (const auto& sub : r.sub_slots) {
        if (sub.served_bits > 0) add_latency_sample(static_cast<int>(s), sub.mean_latency_ms);
      }
    }
  }
}

void Simulation::run_decision_interval(std::int64_t t) {
  const int n_bs = static_cast<int>(bs_.size());
  std::vector<std::vector<SliceResult>> results(n_bs);
  const int workers = std::min(std::max(cfg_.num_threads, 1), std::max(n_bs, 1));
  if (workers <= 1) {
    for (int b = 0; b < n_bs; ++b) process_bs(b, t, results[b]);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (int b = w; b < n_bs; b += workers) process_bs(b, t, results[b]);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (observer_) {
    for (int b = 0; b < n_bs; ++b) {
      IntervalRecord rec;
      rec.interval_index = t;
      rec.bs_index = b;
      rec.capacity_prbs = cfg_.base_stations[b].capacity_prbs;
      for (const auto& r : results[b]) {
        rec.proposed_prbs.push_back(r.proposed);
        rec.enforced_prbs.push_back(r.enforced);
        rec.spare_prbs.push_back(r.spare);
        rec.rewards.push_back(r.reward);
        rec.outcomes.push_back(r.outcome);
      }
      observer_(rec);
    }
  }
  record_interval(static_cast<int>(t / cfg_.epochs_per_episode), results);
}

void Simulation::end_episode(int episode) {
  for (auto& st : bs_) {
    for (auto& ag : st->agents) {
      sync_target(ag.net);
      decay_epsilon(ag.net, episode + 1, schedule_);
    }
  }
  const int period = cfg_.federation_period_episodes;
  if (period > 0 && (episode + 1) % period == 0) run_federation_episode(episode);
}

void Simulation::run_federation_episode(int episode) {
  const std::size_t n_bs = bs_.size();
  if (n_bs == 0) return;
  for (const auto& slice : cfg_.slices) {
    const int s = slice.id;
    FederationRound round;
    round.slice_id = s;
    round.episode_index = episode;
    round.strategy = cfg_.strategy;
    for (std::size_t b = 0; b < n_bs; ++b) {
      const auto& net = bs_[b]->agents[s].net;
      round.uploads.emplace(static_cast<int>(b), Upload{net.online, net.cumulative_reward});
    }

    if (cfg_.strategy != Strategy::kNoFederation) {
      std::vector<std::vector<double>> series;
      for (const auto& st : bs_) {
        const auto& h = st->agents[s].history;
        series.emplace_back(h.begin(), h.end());
      }
      const auto d = distance_matrix(
          series, static_cast<std::size_t>(cfg_.clustering.dtw_window_samples));
      round.clusters = dbscan(d, cfg_.clustering.eps_d, cfg_.clustering.n_min);
    }

    auto install = [&](std::size_t b, const ModelParams& omega) {
      bs_[b]->agents[s].net.replace_model(omega);
    };
    switch (cfg_.strategy) {
      case Strategy::kFdrl: {
        std::vector<ModelParams> all;
        for (const auto& [b, up] : round.uploads) all.push_back(up.model);
        const ModelParams omega = fed_average(all);
        for (std::size_t b = 0; b < n_bs; ++b) install(b, omega);
        break;
      }
      case Strategy::kFullCluster: {
        const auto per_cluster = fed_full_cluster(round, cfg_.full_cluster_literal);
        for (std::size_t b = 0; b < n_bs; ++b) {
          const int label = round.clusters.labels[b];
          if (label != kNoise) install(b, per_cluster.at(label));
        }
        break;
      }
      case Strategy::kRandomRep:
      case Strategy::kBestRep: {
        const auto mode = cfg_.strategy == Strategy::kRandomRep ? RepresentativeMode::kRandom
                                                                : RepresentativeMode::kBest;
        const auto result = fed_representative(round, mode, federation_rng_);
        for (std::size_t b = 0; b < n_bs; ++b) install(b, result.model);
        break;
      }
      case Strategy::kNoFederation:
        break;
    }

    metrics_.overhead.push_back(
        account_overhead(cfg_.strategy, round.clusters, n_bs, model_bytes_, episode, s));
    metrics_.clusters.push_back({episode, s, round.clusters.n_clusters,
                                 static_cast<int>(round.clusters.noise_count()),
                                 round.clusters.labels});
    for (auto& st : bs_) st->agents[s].net.cumulative_reward = 0.0;
    spdlog::debug("episode {} slice {}: {} clusters, {} noise", episode, s,
                  round.clusters.n_clusters, round.clusters.noise_count());
  }
}

SimulationMetrics Simulation::run() {
  std::int64_t t = 0;
  for (int e = 0; e < cfg_.total_episodes; ++e) {
    for (int k = 0; k < cfg_.epochs_per_episode; ++k) run_decision_interval(t++);
    end_episode(e);
    if ((e + 1) % 50 == 0) spdlog::info("episode {}/{}", e + 1, cfg_.total_episodes);
  }
  return metrics_;
}

SimulationMetrics run_simulation(const ScenarioConfig& cfg, IntervalObserver observer) {
  Simulation sim(cfg);
  sim.set_interval_observer(std::move(observer));
  return sim.run();
}

}  // namespace fedslice
