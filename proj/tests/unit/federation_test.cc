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

#include <gtest/gtest.h>

#include <map>
#include <numeric>

namespace fedslice {
namespace {

ModelParams vec(std::vector<double> v) {
  ModelParams p;
  p.layer_sizes = {static_cast<int>(v.size())};
  p.values = std::move(v);
  return p;
}

ClusterAssignment labels(std::vector<int> l) {
  ClusterAssignment c;
  c.labels = std::move(l);
  for (int v : c.labels) c.n_clusters = std::max(c.n_clusters, v + 1);
  return c;
}

TEST(FedAverage, Algebra) {
  const auto t = vec({0.5, -1.25, 3.0});
  const std::vector<ModelParams> same = {t, t};
  EXPECT_EQ(fed_average(same), t);
  const std::vector<ModelParams> opposite = {t, vec({-0.5, 1.25, -3.0})};
  EXPECT_EQ(fed_average(opposite).values, (std::vector<double>{0, 0, 0}));
  const std::vector<ModelParams> three = {vec({1, 2}), vec({3, 4}), vec({5, 6})};
  EXPECT_EQ(fed_average(three).values, (std::vector<double>{3, 4}));
  const std::vector<ModelParams> permuted = {vec({5, 6}), vec({1, 2}), vec({3, 4})};
  EXPECT_EQ(fed_average(permuted), fed_average(three));
  EXPECT_THROW(fed_average(std::vector<ModelParams>{}), std::invalid_argument);
  const std::vector<ModelParams> mismatched = {vec({1, 2}), vec({1, 2, 3})};
  EXPECT_THROW(fed_average(mismatched), std::invalid_argument);
}

TEST(RewardWeights, Examples) {
  const auto third = reward_weights(std::vector<double>{10, 10, 10});
  for (double w : third) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
  EXPECT_EQ(reward_weights(std::vector<double>{1, 3}), (std::vector<double>{0.25, 0.75}));
  const auto shifted = reward_weights(std::vector<double>{-5, 5});
  EXPECT_NEAR(shifted[0], 0.0, 1e-6);
  EXPECT_NEAR(shifted[1], 1.0, 1e-6);
  EXPECT_NEAR(shifted[0] + shifted[1], 1.0, 1e-15);
  const auto neg = reward_weights(std::vector<double>{-3, -1, -2});
  EXPECT_NEAR(std::accumulate(neg.begin(), neg.end(), 0.0), 1.0, 1e-15);
  EXPECT_GT(neg[1], neg[2]);
}

FederationRound make_round(std::vector<ModelParams> models, std::vector<double> rewards,
                           ClusterAssignment c) {
  FederationRound r;
  for (std::size_t b = 0; b < models.size(); ++b) r.uploads[static_cast<int>(b)] = {models[b], rewards[b]};
  r.clusters = std::move(c);
  return r;
}

TEST(FullCluster, WeightedExample) {
  const auto r = make_round({vec({0, 0}), vec({4, 8})}, {1, 3}, labels({0, 0}));
  const auto out = fed_full_cluster(r);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.at(0).values, (std::vector<double>{3, 6}));
  EXPECT_EQ(fed_full_cluster(r, true).at(0).values, (std::vector<double>{1.5, 3}));
}

TEST(FullCluster, SingletonEqualAndNoise) {
  const auto a = vec({1, 2}), b = vec({3, 5}), c = vec({7, 7}), d = vec({9, 1});
  const auto r = make_round({a, b, c, d}, {2, 2, 5, 1}, labels({0, 0, kNoise, 1}));
  const auto out = fed_full_cluster(r);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.at(0).values, (std::vector<double>{2, 3.5}));
  EXPECT_EQ(out.at(1), d);
  // Permuting members inside a cluster does not matter.
  const auto swapped = make_round({b, a, c, d}, {2, 2, 5, 1}, labels({0, 0, kNoise, 1}));
  EXPECT_EQ(fed_full_cluster(swapped), out);
}

TEST(Representative, BestPicksArgmax) {
  std::vector<ModelParams> models;
  for (int b = 0; b < 10; ++b) models.push_back(vec({static_cast<double>(b)}));
  std::vector<double> rewards = {1, 2, 0, 9, 1, 2, 3, 11, 5, 11};
  const auto r = make_round(models, rewards, labels({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}));
  Rng rng = make_stream(1, "fed");
  const auto res = fed_representative(r, RepresentativeMode::kBest, rng);
  EXPECT_EQ(res.representatives, (std::vector<int>{3, 7}));
  EXPECT_FALSE(res.fallback);
  const auto w = reward_weights(std::vector<double>{9, 11});
  EXPECT_DOUBLE_EQ(res.model.values[0], w[0] * 3 + w[1] * 7);
}

TEST(Representative, SingleClusterAndDeterminism) {
  const auto r = make_round({vec({1}), vec({2}), vec({3})}, {1, 1, 1}, labels({0, 0, 0}));
  Rng a = make_stream(5, "fed"), b = make_stream(5, "fed");
  const auto ra = fed_representative(r, RepresentativeMode::kRandom, a);
  const auto rb = fed_representative(r, RepresentativeMode::kRandom, b);
  EXPECT_EQ(ra.representatives, rb.representatives);
  ASSERT_EQ(ra.representatives.size(), 1u);
  EXPECT_EQ(ra.model, r.uploads.at(ra.representatives[0]).model);
}

TEST(Representative, FallbackWithoutClusters) {
  const auto r = make_round({vec({1}), vec({3})}, {1, 1}, labels({kNoise, kNoise}));
  Rng rng = make_stream(1, "fed");
  const auto res = fed_representative(r, RepresentativeMode::kBest, rng);
  EXPECT_TRUE(res.fallback);
  EXPECT_EQ(res.model.values, (std::vector<double>{2}));
}

ClusterAssignment planted(int n_bs, int n_clusters, int size) {
  std::vector<int> l(n_bs, kNoise);
  for (int k = 0; k < n_clusters; ++k)
    for (int i = 0; i < size; ++i) l[k * size + i] = k;
  return labels(l);
}

TEST(Overhead, PlantedClusters) {
  const auto c = planted(50, 3, 15);
  const auto f = account_overhead(Strategy::kFdrl, c, 50, 1);
  const auto fc = account_overhead(Strategy::kFullCluster, c, 50, 1);
  const auto rr = account_overhead(Strategy::kRandomRep, c, 50, 1);
  const auto br = account_overhead(Strategy::kBestRep, c, 50, 1);
  EXPECT_EQ(std::make_pair(f.uplink_bytes, f.downlink_bytes), std::make_pair(50L, 50L));
  EXPECT_EQ(std::make_pair(fc.uplink_bytes, fc.downlink_bytes), std::make_pair(45L, 45L));
  EXPECT_EQ(std::make_pair(rr.uplink_bytes, rr.downlink_bytes), std::make_pair(3L, 50L));
  EXPECT_EQ(br, [&] { auto x = rr; x.strategy = Strategy::kBestRep; return x; }());
  const auto none = account_overhead(Strategy::kNoFederation, c, 50, 3912);
  EXPECT_EQ(none.uplink_bytes + none.downlink_bytes, 0);
  EXPECT_EQ(account_overhead(Strategy::kFdrl, c, 50, 3912).uplink_bytes, 50 * 3912);
}

TEST(Overhead, FallbackCountsAsFdrl) {
  const auto c = planted(50, 0, 0);
  const auto rec = account_overhead(Strategy::kRandomRep, c, 50, 1);
  EXPECT_EQ(rec.uplink_models, 50);
  EXPECT_EQ(rec.downlink_models, 50);
  EXPECT_TRUE(rec.fallback);
}

TEST(Overhead, OrderingOnRandomClusterings) {
  Rng rng = make_stream(9, "overhead");
  std::uniform_int_distribution<int> lab(-1, 4);
  for (int k = 0; k < 500; ++k) {
    std::vector<int> l(20);
    for (auto& v : l) v = lab(rng);
    // Relabel so cluster ids are dense.
    std::map<int, int> remap;
    for (auto& v : l)
      if (v >= 0) v = remap.emplace(v, static_cast<int>(remap.size())).first->second;
    const auto c = labels(l);
    if (c.n_clusters == 0) continue;
    const auto f = account_overhead(Strategy::kFdrl, c, 20, 7);
    const auto fc = account_overhead(Strategy::kFullCluster, c, 20, 7);
    const auto rep = account_overhead(Strategy::kRandomRep, c, 20, 7);
    EXPECT_LE(rep.uplink_bytes, fc.uplink_bytes);
    EXPECT_LE(fc.uplink_bytes, f.uplink_bytes);
  }
}

}  // namespace
}  // namespace fedslice
