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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fedslice/env.h"
#include "oracles.h"

namespace fedslice {
namespace {

TEST(BuildState, Examples) {
  const auto zero = build_state({0.0, 0.0, 0}, 100, 1e6);
  EXPECT_EQ(zero, (StateVector{0, 0, 0}));
  EXPECT_EQ(build_state({20.0, 5e5, 100}, 100, 1e6)[2], 1.0);
  EXPECT_EQ(build_state({20.0, 3e6, 40}, 100, 1e6)[1], 2.0);
  const auto s = build_state({20.0, 5e5, 40}, 100, 1e6);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_DOUBLE_EQ(s[2], 0.4);
  EXPECT_EQ(build_state({-10.0, 1, 0}, 100, 1e6)[0], 0.0);
}

TEST(ActionSpace, Sizes) {
  EXPECT_EQ(action_space(100, 10), (std::vector<int>{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
  const auto fine = action_space(100, 2);
  EXPECT_EQ(fine.size(), 51u);
  EXPECT_EQ(fine.back(), 100);
  EXPECT_EQ(action_space(100, 100), (std::vector<int>{0, 100}));
}

TEST(SelectAction, Greedy) {
  Rng rng = make_stream(1, "sel");
  EXPECT_EQ(select_action(std::vector<double>{1, 3, 2}, 0.0, rng), 1u);
  EXPECT_EQ(select_action(std::vector<double>{5, 5, 1}, 0.0, rng), 0u);
}

TEST(SelectAction, UniformWhenEpsilonOne) {
  Rng rng = make_stream(2, "sel");
  const std::vector<double> q(5, 0.0);
  std::vector<int> counts(5, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[select_action(q, 1.0, rng)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.2, 0.2 * 0.05);
}

TEST(SelectAction, ExploreCountLimitsRandomDraws) {
  Rng rng = make_stream(3, "sel");
  const std::vector<double> q = {0, 0, 0, 0, 9};
  for (int i = 0; i < 2000; ++i) EXPECT_LT(select_action(q, 1.0, 2, rng), 2u);
  EXPECT_EQ(select_action(q, 0.0, 2, rng), 4u);
}

TEST(Reward, AnalyticPoints) {
  Rng rng = make_stream(4, "reward");
  std::uniform_real_distribution<double> snr(-5.0, 40.0);
  const int chunks[] = {2, 5, 10, 20, 25};
  for (int k = 0; k < 100; ++k) {
    const double sigma = snr(rng);
    const int chunk = chunks[k % 5];
    const double rho_up = 2.0 * oracle::shannon_bits(chunk, sigma) * 60.0;
    const double full = oracle::shannon_bits(100, sigma) * 60.0;
    auto at = [&](double alpha) { return compute_reward(100, sigma, full - alpha, chunk, 60.0); };
    EXPECT_NEAR(at(0.0), 0.0, 1e-12);
    EXPECT_NEAR(at(rho_up / 2.0), 0.25, 1e-12);
    EXPECT_NEAR(at(2.0 * rho_up), -1.0, 1e-12);
  }
}

TEST(Reward, Branches) {
  const double r = 10.0;
  // Middle branch: (1 - x) x, bounded in [-0.75, 0.25].
  EXPECT_DOUBLE_EQ(reward_from_gap(-5.0, r, RewardMode::kNormalized), -0.75);
  EXPECT_DOUBLE_EQ(reward_from_gap(10.0, r, RewardMode::kNormalized), 0.0);
  for (double a = -5.0; a <= 10.0; a += 0.25) {
    const double v = reward_from_gap(a, r, RewardMode::kNormalized);
    EXPECT_GE(v, -2.0);
    EXPECT_LE(v, 0.25);
  }
  // Under-provisioning.
  EXPECT_DOUBLE_EQ(reward_from_gap(-6.0, r, RewardMode::kNormalized, LowerBranch::kPrinted),
                   (-6.0 - 4.0 * -5.0) / 10.0);
  EXPECT_DOUBLE_EQ(reward_from_gap(-6.0, r, RewardMode::kNormalized, LowerBranch::kMagnitude),
                   (-6.0 - 20.0) / 10.0);
  EXPECT_LT(reward_from_gap(-60.0, r, RewardMode::kNormalized, LowerBranch::kMagnitude),
            reward_from_gap(-6.0, r, RewardMode::kNormalized, LowerBranch::kMagnitude));
  // Over-provisioning, both modes.
  EXPECT_DOUBLE_EQ(reward_from_gap(30.0, r, RewardMode::kNormalized), -2.0);
  EXPECT_DOUBLE_EQ(reward_from_gap(30.0, r, RewardMode::kLiteral), -20.0);
  EXPECT_DOUBLE_EQ(reward_from_gap(-6.0, r, RewardMode::kLiteral, LowerBranch::kPrinted), 14.0);
}

TEST(Reward, MiddleBranchBoundOverRandomSnr) {
  Rng rng = make_stream(5, "reward");
  std::uniform_real_distribution<double> snr(-10.0, 40.0), frac(-0.5, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double sigma = snr(rng);
    const double rho_up = 2.0 * prb_throughput(10, sigma) * 60.0;
    const double alpha = frac(rng) * rho_up;
    const double full = prb_throughput(100, sigma) * 60.0;
    const double v = compute_reward(100, sigma, full - alpha, 10, 60.0);
    EXPECT_GE(v, -0.75 - 1e-9);
    EXPECT_LE(v, 0.25 + 1e-12);
  }
}

TEST(Penalty, Examples) {
  EXPECT_EQ(apply_penalty(60, 50, 100.0, 0.2), -100.0);
  EXPECT_EQ(apply_penalty(50, 50, 100.0, 0.2), 0.2);
  EXPECT_EQ(apply_penalty(0, 0, 100.0, -0.3), -0.3);
}

TEST(ClipAllocation, Examples) {
  EXPECT_EQ(clip_allocation(60, 50, 10), 50);
  EXPECT_EQ(clip_allocation(60, 45, 10), 40);
  EXPECT_EQ(clip_allocation(30, 100, 10), 30);
  EXPECT_EQ(clip_allocation(70, 0, 10), 0);
}

TEST(ReplayBuffer, RingAndDistinctSamples) {
  ReplayBuffer buf(4, make_stream(6, "replay"));
  for (int i = 0; i < 6; ++i) {
    Transition t;
    t.action = static_cast<std::size_t>(i);
    buf.push(t);
  }
  EXPECT_EQ(buf.size(), 4u);
  std::set<std::size_t> actions;
  for (std::size_t i = 0; i < buf.size(); ++i) actions.insert(buf[i].action);
  EXPECT_EQ(actions, (std::set<std::size_t>{2, 3, 4, 5}));
  for (int k = 0; k < 50; ++k) {
    const auto idx = buf.sample_indices(3);
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 3u);
    for (auto i : idx) EXPECT_LT(i, 4u);
  }
}

AgentNet small_net(std::uint64_t seed) {
  Rng rng = make_stream(seed, "net");
  return AgentNet::create({3, 8, 8, 4}, 1.0, rng);
}

TEST(TdTarget, DoubleAndVanilla) {
  auto net = small_net(7);
  Rng rng = make_stream(7, "perturb");
  std::normal_distribution<double> n(0.0, 0.3);
  for (auto& v : net.target.values) v += n(rng);
  Transition t{{0.2, 0.4, 0.6}, 1, 0.5, {0.9, 0.1, 0.3}};
  const auto qo = forward(net.online, t.next_state);
  const auto qt = forward(net.target, t.next_state);
  const auto best = static_cast<std::size_t>(std::max_element(qo.begin(), qo.end()) - qo.begin());
  EXPECT_DOUBLE_EQ(td_target(net, t, 0.9, true), 0.5 + 0.9 * qt[best]);
  EXPECT_DOUBLE_EQ(td_target(net, t, 0.9, false), 0.5 + 0.9 * qo[best]);
  EXPECT_DOUBLE_EQ(td_target(net, t, 0.0, true), 0.5);
}

TEST(TrainStep, NeedsFullBatch) {
  auto net = small_net(8);
  ReplayBuffer buf(100, make_stream(8, "replay"));
  buf.push({});
  EXPECT_FALSE(train_step(net, buf, {.batch_size = 2}).has_value());
}

TEST(TrainStep, RegressesToFixedTarget) {
  auto net = small_net(9);
  ReplayBuffer buf(10, make_stream(9, "replay"));
  Transition t{{0.5, 0.5, 0.5}, 2, 0.8, {0.1, 0.2, 0.3}};
  buf.push(t);
  TrainOptions opts{.batch_size = 1, .gamma = 0.0, .learning_rate = 0.01};
  const auto target_before = net.target;
  for (int k = 0; k < 2000; ++k) train_step(net, buf, opts);
  EXPECT_NEAR(forward(net.online, t.state)[2], 0.8, 1e-3);
  EXPECT_EQ(net.target, target_before);

  // Frozen bootstrapped target with gamma > 0.
  auto net2 = small_net(10);
  opts.gamma = 0.5;
  for (int k = 0; k < 3000; ++k) train_step(net2, buf, opts);
  EXPECT_NEAR(forward(net2.online, t.state)[2], td_target(net2, t, 0.5, true), 1e-3);
}

TEST(SyncTarget, CopiesAndIsIdempotent) {
  auto net = small_net(11);
  for (auto& v : net.online.values) v *= 1.5;
  sync_target(net);
  EXPECT_EQ(net.online, net.target);
  sync_target(net);
  EXPECT_EQ(net.online, net.target);
  const std::vector<double> s = {0.3, 0.3, 0.3};
  EXPECT_EQ(forward(net.online, s), forward(net.target, s));
}

TEST(Epsilon, Schedule) {
  EpsilonSchedule s{1.0, 0.02, 200, 0.5};
  EXPECT_EQ(epsilon_at(0, s), 1.0);
  EXPECT_NEAR(epsilon_at(100, s), 0.02, 1e-6);
  EXPECT_EQ(epsilon_at(200, s), 0.02);
  EXPECT_NEAR(epsilon_at(50, s), std::sqrt(0.02), 1e-12);
  for (int e = 1; e <= 200; ++e) EXPECT_LE(epsilon_at(e, s), epsilon_at(e - 1, s));
  auto net = small_net(12);
  decay_epsilon(net, 100, s);
  EXPECT_NEAR(net.epsilon, 0.02, 1e-6);
}

TEST(DemandScale, Percentile) {
  DemandScale d(100);
  EXPECT_EQ(d.value(5.0), 5.0);
  EXPECT_EQ(d.value(0.0), 1.0);
  for (int i = 1; i <= 100; ++i) d.observe(i);
  EXPECT_EQ(d.value(0.0), 95.0);
  for (int i = 0; i < 100; ++i) d.observe(1000.0);
  EXPECT_EQ(d.value(0.0), 1000.0);
}

TEST(AgentCheckpoint, RoundTrip) {
  auto net = small_net(13);
  net.epsilon = 0.25;
  std::stringstream buf;
  save_agent_checkpoint(buf, net, 42);
  std::uint32_t episode = 0;
  const auto back = load_agent_checkpoint(buf, &episode);
  EXPECT_EQ(episode, 42u);
  EXPECT_FLOAT_EQ(static_cast<float>(back.epsilon), 0.25f);
  EXPECT_EQ(back.online, back.target);
  ASSERT_EQ(back.online.values.size(), net.online.values.size());
  for (std::size_t k = 0; k < net.online.values.size(); ++k)
    EXPECT_EQ(back.online.values[k], static_cast<double>(static_cast<float>(net.online.values[k])));
}

TEST(ReplaceModel, ResetsBothNetworks) {
  auto net = small_net(14);
  net.opt.step_count = 5;
  auto other = small_net(15).online;
  net.replace_model(other);
  EXPECT_EQ(net.online, other);
  EXPECT_EQ(net.target, other);
  EXPECT_EQ(net.opt.step_count, 0);
}

}  // namespace
}  // namespace fedslice
