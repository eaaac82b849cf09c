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

#include "fedslice/federation.h"

#include <algorithm>
#include <spdlog/spdlog.h>
#include <stdexcept>

namespace fedslice {
namespace {

void check_shapes(std::span<const ModelParams> models) {
  if (models.empty()) throw std::invalid_argument("aggregation over an empty model list");
  for (const auto& m : models) {
    if (!m.same_shape(models.front()))
      throw std::invalid_argument("aggregation over models of different shapes");
  }
}

const Upload& upload_for(const FederationRound& round, int bs_id) {
  auto it = round.uploads.find(bs_id);
  if (it == round.uploads.end())
    throw std::invalid_argument("cluster references BS " + std::to_string(bs_id) +
                                " which uploaded no model");
  return it->second;
}

ModelParams combine(const FederationRound& round, std::span<const int> bs_ids) {
  std::vector<ModelParams> models;
  std::vector<double> rewards;
  for (int b : bs_ids) {
    const auto& up = upload_for(round, b);
    models.push_back(up.model);
    rewards.push_back(up.reward);
  }
  const auto weights = reward_weights(rewards);
  return weighted_sum(models, weights);
}

}  // namespace

ModelParams fed_average(std::span<const ModelParams> models) {
  check_shapes(models);
  ModelParams out = models.front();
  for (std::size_t k = 1; k < models.size(); ++k) {
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += models[k].values[i];
  }
  const double inv = 1.0 / static_cast<double>(models.size());
  for (auto& v : out.values) v *= inv;
  return out;
}

ModelParams weighted_sum(std::span<const ModelParams> models, std::span<const double> weights) {
  check_shapes(models);
  if (weights.size() != models.size())
    throw std::invalid_argument("weighted_sum: one weight per model required");
  ModelParams out = models.front();
  std::fill(out.values.begin(), out.values.end(), 0.0);
  for (std::size_t k = 0; k < models.size(); ++k) {
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += weights[k] * models[k].values[i];
  }
  return out;
}

std::vector<double> reward_weights(std::span<const double> rewards) {
  if (rewards.empty()) return {};
  std::vector<double> w(rewards.begin(), rewards.end());
  const double lo = *std::min_element(w.begin(), w.end());
  const double hi = *std::max_element(w.begin(), w.end());
  if (lo == hi) return std::vector<double>(w.size(), 1.0 / static_cast<double>(w.size()));
  if (lo <= 0.0) {
    for (auto& v : w) v += -lo + kRewardShift;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (auto& v : w) v /= total;
  return w;
}

std::map<int, ModelParams> fed_full_cluster(const FederationRound& round, bool literal) {
  std::map<int, ModelParams> out;
  for (int k = 0; k < round.clusters.n_clusters; ++k) {
    std::vector<int> ids;
    for (std::size_t b : round.clusters.members(k)) ids.push_back(static_cast<int>(b));
    if (ids.empty()) continue;
    ModelParams omega = combine(round, ids);
    if (literal) {
      const double shrink = 1.0 / static_cast<double>(ids.size());
      for (auto& v : omega.values) v *= shrink;
    }
    out.emplace(k, std::move(omega));
  }
  return out;
}

RepresentativeResult fed_representative(const FederationRound& round, RepresentativeMode mode,
                                        Rng& rng) {
  RepresentativeResult result;
  for (int k = 0; k < round.clusters.n_clusters; ++k) {
    const auto members = round.clusters.members(k);
    if (members.empty()) continue;
    int chosen;
    if (mode == RepresentativeMode::kRandom) {
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      chosen = static_cast<int>(members[pick(rng)]);
    } else {
      chosen = static_cast<int>(members.front());
      double best = upload_for(round, chosen).reward;
      for (std::size_t b : members) {
        const double r = upload_for(round, static_cast<int>(b)).reward;
        if (r > best) {
          best = r;
          chosen = static_cast<int>(b);
        }
      }
    }
    result.representatives.push_back(chosen);
  }

  if (result.representatives.empty()) {
    spdlog::debug("slice {} episode {}: no clusters, representative round falls back to "
                  "plain averaging",
                  round.slice_id, round.episode_index);
    std::vector<ModelParams> all;
    for (const auto& [bs, up] : round.uploads) all.push_back(up.model);
    result.model = fed_average(all);
    result.fallback = true;
    return result;
  }
  result.model = combine(round, result.representatives);
  return result;
}

OverheadRecord account_overhead(Strategy strategy, const ClusterAssignment& clusters,
                                std::size_t n_bs, std::size_t model_bytes, int episode_index,
                                int slice_id) {
  OverheadRecord rec;
  rec.episode_index = episode_index;
  rec.slice_id = slice_id;
  rec.strategy = strategy;
  const auto all = static_cast<std::int64_t>(n_bs);
  const auto clustered = static_cast<std::int64_t>(clusters.labels.size() - clusters.noise_count());
  switch (strategy) {
    case Strategy::kFdrl:
      rec.uplink_models = all;
      rec.downlink_models = all;
      break;
    case Strategy::kFullCluster:
      rec.uplink_models = clustered;
      rec.downlink_models = clustered;
      break;
    case Strategy::kRandomRep:
    case Strategy::kBestRep:
      if (clusters.n_clusters == 0) {
        rec.uplink_models = all;
        rec.downlink_models = all;
        rec.fallback = true;
      } else {
        rec.uplink_models = clusters.n_clusters;
        rec.downlink_models = all;
      }
      break;
    case Strategy::kNoFederation:
      break;
  }
  const auto m = static_cast<std::int64_t>(model_bytes);
  rec.uplink_bytes = rec.uplink_models * m;
  rec.downlink_bytes = rec.downlink_models * m;
  return rec;
}

}  // namespace fedslice
