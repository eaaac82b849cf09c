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

#include "fedslice/domain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "fedslice/rng.h"

namespace fedslice {
namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  out << "invalid scenario configuration (" << issues.size() << " issue"
      << (issues.size() == 1 ? "" : "s") << ")";
  for (const auto& issue : issues) {
    out << "\n  " << issue.path << ": " << issue.message;
  }
  return out.str();
}

std::string indexed(std::string_view base, std::size_t i,
                    std::string_view field) {
  std::ostringstream out;
  out << base << "[" << i << "]." << field;
  return out.str();
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kFdrl:
      return "FDRL";
    case Strategy::kFullCluster:
      return "FullCluster";
    case Strategy::kRandomRep:
      return "RandomRep";
    case Strategy::kBestRep:
      return "BestRep";
    case Strategy::kNoFederation:
      return "NoFederation";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (Strategy s : {Strategy::kFdrl, Strategy::kFullCluster,
                     Strategy::kRandomRep, Strategy::kBestRep,
                     Strategy::kNoFederation}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<ConfigIssue> validate_config(const ScenarioConfig& cfg) {
  std::vector<ConfigIssue> issues;
  auto fail = [&](std::string path, std::string message) {
    issues.push_back({std::move(path), std::move(message)});
  };

  if (cfg.slices.empty()) fail("slices", "empty slice set");
  if (cfg.base_stations.empty()) fail("base_stations", "empty base station set");

  std::set<int> priorities;
  std::set<int> slice_ids;
  for (std::size_t i = 0; i < cfg.slices.size(); ++i) {
    const auto& s = cfg.slices[i];
    if (s.id != static_cast<int>(i))
      fail(indexed("slices", i, "id"), "slice ids must be 0..n-1 in order");
    if (!(s.latency_bound_ms > 0.0) || !std::isfinite(s.latency_bound_ms))
      fail(indexed("slices", i, "latency_bound_ms"), "must be > 0");
    if (!(s.penalty_coeff >= 0.0))
      fail(indexed("slices", i, "penalty_coeff"), "must be >= 0");
    if (s.chunk_prbs < 1) fail(indexed("slices", i, "chunk_prbs"), "must be >= 1");
    if (!priorities.insert(s.priority).second)
      fail(indexed("slices", i, "priority"), "duplicate priority");
    if (!(s.user_share >= 0.0))
      fail(indexed("slices", i, "user_share"), "must be >= 0");
    if (!(s.mean_demand_units >= 0.0))
      fail(indexed("slices", i, "mean_demand_units"), "must be >= 0");
    if (s.constant_offered_bits && *s.constant_offered_bits < 0)
      fail(indexed("slices", i, "constant_offered_bits"), "must be >= 0");
  }

  std::set<int> bs_ids;
  for (std::size_t b = 0; b < cfg.base_stations.size(); ++b) {
    const auto& bs = cfg.base_stations[b];
    if (bs.id != static_cast<int>(b))
      fail(indexed("base_stations", b, "id"),
           "base station ids must be 0..n-1 in order");
    if (bs.capacity_prbs < 1) {
      fail(indexed("base_stations", b, "capacity_prbs"), "must be >= 1");
    } else if (bs.capacity_prbs != cfg.base_stations.front().capacity_prbs) {
      fail(indexed("base_stations", b, "capacity_prbs"),
           "all base stations must have the same capacity");
    } else {
      for (const auto& s : cfg.slices) {
        if (s.chunk_prbs >= 1 && bs.capacity_prbs % s.chunk_prbs != 0) {
          fail(indexed("base_stations", b, "capacity_prbs"),
               "capacity not a multiple of chunk (slice " +
                   std::to_string(s.id) + ", chunk " +
                   std::to_string(s.chunk_prbs) + ")");
        }
      }
    }
    if (bs.profile < 0 ||
        bs.profile >= static_cast<int>(cfg.traffic.profiles.size()))
      fail(indexed("base_stations", b, "profile"), "unknown diurnal profile");
    if (!(bs.relevance >= 0.0))
      fail(indexed("base_stations", b, "relevance"), "must be >= 0");
  }

  if (!(cfg.decision_interval_s > 0.0))
    fail("decision_interval_s", "must be > 0");
  if (!(cfg.sub_slot_s > 0.0) || cfg.sub_slot_s > cfg.decision_interval_s)
    fail("sub_slot_s", "must be in (0, decision_interval_s]");
  if (cfg.epochs_per_episode < 1) fail("epochs_per_episode", "must be >= 1");
  if (cfg.federation_period_episodes < 1)
    fail("federation_period_episodes", "must be >= 1");
  if (cfg.total_episodes < 0) fail("total_episodes", "must be >= 0");
  if (cfg.num_threads < 1) fail("num_threads", "must be >= 1");

  const auto& c = cfg.clustering;
  if (!(c.eps_d > 0.0)) fail("clustering.eps_d", "must be > 0");
  if (c.n_min < 1) fail("clustering.n_min", "must be >= 1");
  if (c.dtw_window_samples < 0)
    fail("clustering.dtw_window_samples", "must be >= 0");
  if (c.lookback_intervals < 1)
    fail("clustering.lookback_intervals", "must be >= 1");

  const auto& t = cfg.traffic;
  if (t.n_users < 0) fail("traffic.n_users", "must be >= 0");
  if (!(t.unit_bits > 0.0)) fail("traffic.unit_bits", "must be > 0");
  if (!std::isfinite(t.snr_mean_db)) fail("traffic.snr_mean_db", "must be finite");
  if (t.profiles.empty()) fail("traffic.profiles", "empty profile set");
  if (t.mobility_period_intervals < 1)
    fail("traffic.mobility_period_intervals", "must be >= 1");
  if (!(t.p_new >= 0.0 && t.p_new <= 1.0))
    fail("traffic.p_new", "must be in [0, 1]");
  if (!(t.gamma_epr >= 0.0)) fail("traffic.gamma_epr", "must be >= 0");

  const auto& l = cfg.learning;
  if (!(l.gamma >= 0.0 && l.gamma <= 1.0))
    fail("learning.gamma", "must be in [0, 1]");
  if (!(l.learning_rate > 0.0)) fail("learning.learning_rate", "must be > 0");
  if (l.buffer_size < 1) fail("learning.buffer_size", "must be >= 1");
  if (l.batch_size < 1 || l.batch_size > l.buffer_size)
    fail("learning.batch_size", "must be in [1, buffer_size]");
  if (l.train_steps_per_interval < 0)
    fail("learning.train_steps_per_interval", "must be >= 0");
  if (!(l.epsilon_floor >= 0.0 && l.epsilon_floor <= l.epsilon_start &&
        l.epsilon_start <= 1.0))
    fail("learning.epsilon_start",
         "require 0 <= epsilon_floor <= epsilon_start <= 1");
  if (!(l.epsilon_floor_fraction > 0.0 && l.epsilon_floor_fraction <= 1.0))
    fail("learning.epsilon_floor_fraction", "must be in (0, 1]");
  if (l.hidden_layers.empty()) fail("learning.hidden_layers", "must be non-empty");
  for (std::size_t i = 0; i < l.hidden_layers.size(); ++i) {
    if (l.hidden_layers[i] < 1)
      fail(indexed("learning.hidden_layers", i, "size"), "must be >= 1");
  }
  return issues;
}

const ScenarioConfig& require_valid(const ScenarioConfig& cfg) {
  auto issues = validate_config(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

std::vector<int> priority_order(const ScenarioConfig& cfg) {
  std::vector<int> order(cfg.slices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cfg.slices[a].priority < cfg.slices[b].priority;
  });
  return order;
}

std::vector<BaseStation> generate_layout(int n_bs, int capacity_prbs,
                                         double area_m, int n_profiles,
                                         std::uint64_t seed) {
  Rng rng = make_stream(seed, "layout");
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(n_bs))));
  const double pitch = area_m / side;
  std::uniform_real_distribution<double> jitter(-0.25 * pitch, 0.25 * pitch);
  std::uniform_real_distribution<double> relevance(0.5, 1.5);
  std::vector<BaseStation> out;
  out.reserve(n_bs);
  for (int b = 0; b < n_bs; ++b) {
    BaseStation bs;
    bs.id = b;
    bs.capacity_prbs = capacity_prbs;
    bs.position.x = (b % side + 0.5) * pitch + jitter(rng);
    bs.position.y = (b / side + 0.5) * pitch + jitter(rng);
    bs.profile = n_profiles > 0 ? b % n_profiles : 0;
    bs.relevance = relevance(rng);
    out.push_back(bs);
  }
  return out;
}

ScenarioConfig default_scenario(int n_bs, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.rng_seed = seed;
  cfg.total_episodes = 1000;
  SliceSpec urllc{0, "URLLC", 10.0, 100.0, 10, 0, 1.0 / 3.0, 60.0, {}};
  SliceSpec embb{1, "eMBB", 40.0, 100.0, 10, 1, 1.0 / 3.0, 250.0, {}};
  SliceSpec mmtc{2, "mMTC", 20.0, 100.0, 10, 2, 1.0 / 3.0, 100.0, {}};
  cfg.slices = {urllc, embb, mmtc};
  cfg.base_stations =
      generate_layout(n_bs, 100, 3000.0,
                      static_cast<int>(cfg.traffic.profiles.size()), seed);
  return cfg;
}

}  // namespace fedslice
