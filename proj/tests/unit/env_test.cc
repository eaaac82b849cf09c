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

#include "fedslice/env.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"

namespace fedslice {
namespace {

SliceSpec slice_with_bound(double ms) {
  SliceSpec s;
  s.latency_bound_ms = ms;
  return s;
}

AllocationDecision alloc(int prbs) {
  AllocationDecision a;
  a.prbs = prbs;
  return a;
}

void expect_conserved(const IntervalOutcome& o) {
  EXPECT_EQ(o.served_bits + o.dropped_bits + o.backlog_bits_end - o.backlog_bits_start,
            o.offered_bits);
}

TEST(PrbThroughput, Examples) {
  EXPECT_EQ(prb_throughput(0, 25.0), 0.0);
  for (double snr : {-5.0, 0.0, 13.0, 25.0, 40.0})
    EXPECT_DOUBLE_EQ(prb_throughput(20, snr), 2.0 * prb_throughput(10, snr));
  const double expected = oracle::shannon_bits(10, 25.0);
  EXPECT_NEAR(prb_throughput(10, 25.0) / expected, 1.0, 1e-6);
  EXPECT_NEAR(prb_throughput(10, 25.0), 1.4956e7, 1e3);
}

TEST(SampleSnr, Deterministic) {
  Rng a = make_stream(3, "snr"), b = make_stream(3, "snr");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_snr(a, 25.0), sample_snr(b, 25.0));
}

TEST(SampleSnr, DbMeanMatches) {
  for (double mean_db : {25.0, 0.0}) {
    Rng rng = make_stream(11, "snr-mc");
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double s = sample_snr(rng, mean_db);
      EXPECT_GE(s, kSnrFloorDb);
      sum += s;
    }
    EXPECT_NEAR(sum / n, mean_db, 0.5) << mean_db;
  }
}

TEST(StepInterval, Underload) {
  QueueState q;
  const auto slice = slice_with_bound(10);
  const auto offered = static_cast<std::int64_t>(0.8 * prb_throughput(50, 20.0) * 60.0);
  const auto o = step_interval(q, alloc(50), 20.0, offered, slice, 60.0);
  expect_conserved(o);
  EXPECT_EQ(o.dropped_bits, 0);
  EXPECT_EQ(o.backlog_bits_end, 0);
  EXPECT_EQ(o.served_bits, offered);
  EXPECT_LT(o.mean_latency_ms, 1000.0);
  EXPECT_LE(o.max_latency_ms, 10.0 + 1e-9);
}

TEST(StepInterval, ZeroServiceDropsEverything) {
  QueueState q;
  const auto slice = slice_with_bound(20);
  const std::int64_t offered = 6'000'000;
  IntervalOutcome o;
  for (int k = 0; k < 3; ++k) {
    o = step_interval(q, alloc(0), 25.0, offered, slice, 60.0);
    expect_conserved(o);
    EXPECT_EQ(o.served_bits, 0);
    EXPECT_EQ(o.mean_latency_ms, 0.0);
  }
  // Only the last 20 ms of arrivals can still be waiting.
  EXPECT_LE(o.backlog_bits_end, offered / 60 * 0.02 + 2);
  EXPECT_EQ(o.backlog_bits_start, o.backlog_bits_end);
  EXPECT_EQ(o.dropped_bits, offered);
}

TEST(StepInterval, FiftyPercentOverloadMatchesFluidOracle) {
  QueueState q;
  const auto slice = slice_with_bound(10);
  const double rate = prb_throughput(30, 25.0);
  const auto offered = static_cast<std::int64_t>(1.5 * rate * 60.0);
  const auto o = step_interval(q, alloc(30), 25.0, offered, slice, 60.0);
  expect_conserved(o);
  const auto ref = oracle::fluid_queue(1.5 * rate, rate, 0.010, 60.0, 1e-5);
  const double ref_fraction = ref.dropped / (1.5 * rate * 60.0);
  const double got = static_cast<double>(o.dropped_bits) / static_cast<double>(offered);
  EXPECT_NEAR(got, ref_fraction, 1e-3 * ref_fraction);
  // Server never idles; integer rounding costs at most a bit per sub-slot.
  EXPECT_NEAR(static_cast<double>(o.served_bits), rate * 60.0, 60.0);
  EXPECT_LE(o.max_latency_ms, 10.0 + 1e-9);
}

TEST(StepInterval, ConservationWithCarryOver) {
  Rng rng = make_stream(5, "env-random");
  std::uniform_int_distribution<int> prbs(0, 10);
  std::uniform_int_distribution<std::int64_t> bits(0, 400'000'000);
  std::uniform_real_distribution<double> snr(-5.0, 35.0);
  for (double bound : {10.0, 20.0, 40.0, 1500.0}) {
    QueueState q;
    const auto slice = slice_with_bound(bound);
    for (int k = 0; k < 200; ++k) {
      const auto before = q.backlog_bits();
      const auto o = step_interval(q, alloc(prbs(rng) * 10), snr(rng), bits(rng), slice, 60.0);
      EXPECT_EQ(o.backlog_bits_start, before);
      EXPECT_EQ(o.backlog_bits_end, q.backlog_bits());
      expect_conserved(o);
      EXPECT_GE(o.dropped_bits, 0);
      EXPECT_GE(o.served_bits, 0);
      EXPECT_LE(o.max_latency_ms, bound + 1e-9);
    }
  }
}

TEST(StepInterval, DroppedNonIncreasingInAllocation) {
  const auto slice = slice_with_bound(20);
  const std::int64_t offered = 900'000'000;
  std::int64_t prev = std::numeric_limits<std::int64_t>::max();
  for (int prbs = 0; prbs <= 100; prbs += 10) {
    QueueState q;
    const auto o = step_interval(q, alloc(prbs), 25.0, offered, slice, 60.0);
    EXPECT_LE(o.dropped_bits, prev) << prbs;
    prev = o.dropped_bits;
  }
}

TEST(StepInterval, PerSubSlotBreakdown) {
  QueueState q;
  const auto slice = slice_with_bound(40);
  std::vector<SubSlotLatency> slots;
  const auto o = step_interval(q, alloc(40), 25.0, 2'000'000'000, slice, 60.0, 1.0, &slots);
  ASSERT_EQ(slots.size(), 60u);
  std::int64_t served = 0;
  double weighted = 0.0;
  for (const auto& s : slots) {
    served += s.served_bits;
    weighted += s.mean_latency_ms * static_cast<double>(s.served_bits);
  }
  EXPECT_EQ(served, o.served_bits);
  EXPECT_NEAR(weighted / static_cast<double>(served), o.mean_latency_ms, 1e-6);
}

}  // namespace
}  // namespace fedslice
