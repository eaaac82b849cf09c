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

#ifndef FEDSLICE_ENV_H_
#define FEDSLICE_ENV_H_

#include <cstdint>
#include <deque>
#include <vector>

#include "fedslice/domain.h"
#include "fedslice/rng.h"

namespace fedslice {

inline constexpr double kPrbBandwidthHz = 180.0e3;
inline constexpr double kSnrFloorDb = -30.0;

// Shannon capacity of `prbs` resource blocks at the given SNR, in bits/s.
double prb_throughput(int prbs, double snr_db);

// Offset between the mean of 10*log10(X) and 10*log10(E[X]) for an
// exponentially distributed X: 10 * Euler-Mascheroni / ln(10).
inline constexpr double kRayleighDbBias = 2.5068206334730758;

// Draws the SNR of one interval: Rayleigh amplitude, exponential power,
// scaled so the dB-domain mean equals `mean_db`. Never below the floor.
double sample_snr(Rng& rng, double mean_db);

// Bits that arrived uniformly over [arrival_start_s, arrival_end_s].
// Times are relative to the start of the current decision interval, so
// traffic carried over from earlier intervals has negative timestamps.
struct QueueSegment {
  std::int64_t bits = 0;
  double arrival_start_s = 0.0;
  double arrival_end_s = 0.0;
  bool operator==(const QueueSegment&) const = default;
};

struct QueueState {
  std::deque<QueueSegment> segments;  // FIFO, oldest first
  std::int64_t backlog_bits() const;
};

struct IntervalOutcome {
  std::int64_t offered_bits = 0;
  std::int64_t served_bits = 0;
  std::int64_t dropped_bits = 0;
  std::int64_t backlog_bits_start = 0;
  std::int64_t backlog_bits_end = 0;
  // Served-bit-weighted mean waiting time; 0 when nothing was served.
  double mean_latency_ms = 0.0;
  // Largest waiting time of any served bit.
  double max_latency_ms = 0.0;
};

struct SubSlotLatency {
  std::int64_t served_bits = 0;
  double mean_latency_ms = 0.0;
};

// Simulates one decision interval of a slice's transmission buffer.
//
// The offered bits are split evenly across sub-slots of `sub_slot_s`
// seconds and arrive uniformly inside each sub-slot. The buffer is served
// FIFO at prb_throughput(alloc.prbs, snr_db). A bit whose waiting time
// reaches the slice latency bound is removed and counted as dropped, so
// no served bit ever waits longer than the bound. Volumes are integral
// and served + dropped + backlog_end - backlog_start == offered exactly.
// `per_sub_slot`, when given, receives one entry per sub-slot.
IntervalOutcome step_interval(QueueState& queue, const AllocationDecision& alloc,
                              double snr_db, std::int64_t offered_bits,
                              const SliceSpec& slice, double interval_s,
                              double sub_slot_s = 1.0,
                              std::vector<SubSlotLatency>* per_sub_slot = nullptr);

}  // namespace fedslice

#endif  // FEDSLICE_ENV_H_
