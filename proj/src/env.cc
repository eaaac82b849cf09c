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

#include <algorithm>
#include <cmath>
#include <limits>

namespace fedslice {
namespace {

constexpr double kTimeEps = 1e-12;

struct Tally {
  std::int64_t served = 0;
  std::int64_t dropped = 0;
  double latency_bit_s = 0.0;  // sum over served bits of waiting time
  double max_latency_s = 0.0;

  void serve(std::int64_t bits, double mean_wait_s, double max_wait_s) {
    if (bits <= 0) return;
    served += bits;
    latency_bit_s += static_cast<double>(bits) * mean_wait_s;
    max_latency_s = std::max(max_latency_s, max_wait_s);
  }
};

std::int64_t clamp_bits(double value, std::int64_t limit) {
  if (!(value > 0.0)) return 0;
  const double rounded = std::round(value);
  if (rounded >= static_cast<double>(limit)) return limit;
  return static_cast<std::int64_t>(rounded);
}

// Exact fluid FIFO with deadline dropping over piecewise-uniform arrivals.
class FluidServer {
 public:
  FluidServer(std::deque<QueueSegment>& queue, double rate, double bound_s)
      : queue_(queue), rate_(rate), bound_(bound_s) {}

  void run(double t, double t_end, Tally& tally) {
    if (rate_ <= 0.0) {
      drop_expired(t_end - bound_, tally);
      return;
    }
    while (t < t_end - kTimeEps) {
      drop_expired(t - bound_, tally);
      if (queue_.empty()) break;
      QueueSegment& head = queue_.front();
      if (head.bits <= 0) {
        queue_.pop_front();
        continue;
      }
      const double h = head.arrival_start_s;
      const double window = head.arrival_end_s - head.arrival_start_s;

      if (h > t + kTimeEps) {  // nothing has arrived yet
        t = std::min(h, t_end);
        continue;
      }
      const double density =
          window > kTimeEps ? static_cast<double>(head.bits) / window
                            : std::numeric_limits<double>::infinity();
      const double lag = std::max(0.0, t - h);

      if (lag <= kTimeEps && density <= rate_) {
        // Caught up: every arriving bit is served on arrival.
        const double t_next = std::min(head.arrival_end_s, t_end);
        const std::int64_t bits =
            t_next >= head.arrival_end_s - kTimeEps
                ? head.bits
                : clamp_bits(density * (t_next - h), head.bits);
        consume(bits, t_next);
        tally.serve(bits, 0.0, 0.0);
        t = t_next;
        continue;
      }

      const double v = rate_ / density;  // head advance per unit time
      const double slack = bound_ - lag;

      if (slack <= kTimeEps && v < 1.0) {
        // Head pinned at the deadline: serve at `rate_`, drop the excess.
        const double dt = std::min(head.arrival_end_s - h, t_end - t);
        const bool finishes = h + dt >= head.arrival_end_s - kTimeEps;
        const std::int64_t consumed =
            finishes ? head.bits : clamp_bits(density * dt, head.bits);
        const std::int64_t served =
            clamp_bits(static_cast<double>(consumed) * v, consumed);
        consume(consumed, h + dt);
        tally.serve(served, bound_, bound_);
        tally.dropped += consumed - served;
        t += dt;
        continue;
      }

      double dt = static_cast<double>(head.bits) / rate_;  // finish segment
      bool finishes = true;
      auto limit = [&](double candidate) {
        if (candidate < dt) {
          dt = candidate;
          finishes = false;
        }
      };
      limit(t_end - t);
      if (v > 1.0) limit(lag / (v - 1.0));
      if (v < 1.0) limit(slack / (1.0 - v));
      dt = std::max(dt, 0.0);

      const std::int64_t consumed =
          finishes ? head.bits : clamp_bits(rate_ * dt, head.bits);
      const double wait_end = lag + (1.0 - v) * dt;
      consume(consumed, finishes ? head.arrival_end_s : h + v * dt);
      tally.serve(consumed, 0.5 * (lag + wait_end),
                  std::min(bound_, std::max(lag, wait_end)));
      t += dt;
    }
    drop_expired(t_end - bound_, tally);
  }

 private:
  void consume(std::int64_t bits, double new_start) {
    QueueSegment& head = queue_.front();
    head.bits -= bits;
    head.arrival_start_s = std::min(new_start, head.arrival_end_s);
    if (head.bits <= 0) queue_.pop_front();
  }

  // Removes every bit that arrived before `cutoff`.
  void drop_expired(double cutoff, Tally& tally) {
    while (!queue_.empty()) {
      QueueSegment& head = queue_.front();
      if (head.arrival_start_s >= cutoff - kTimeEps) return;
      const double window = head.arrival_end_s - head.arrival_start_s;
      if (head.arrival_end_s <= cutoff + kTimeEps || window <= kTimeEps) {
        tally.dropped += head.bits;
        queue_.pop_front();
        continue;
      }
      const std::int64_t cut = clamp_bits(
          static_cast<double>(head.bits) * (cutoff - head.arrival_start_s) /
              window,
          head.bits);
      tally.dropped += cut;
      head.bits -= cut;
      head.arrival_start_s = cutoff;
      if (head.bits <= 0) queue_.pop_front();
      return;
    }
  }

  std::deque<QueueSegment>& queue_;
  double rate_;
  double bound_;
};

}  // namespace

double prb_throughput(int prbs, double snr_db) {
  if (prbs <= 0) return 0.0;
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  return static_cast<double>(prbs) * kPrbBandwidthHz * std::log2(1.0 + snr_linear);
}

double sample_snr(Rng& rng, double mean_db) {
  // |h|^2 of a Rayleigh amplitude is exponential with mean 2*scale^2.
  const double mean_power = std::pow(10.0, (mean_db + kRayleighDbBias) / 10.0);
  std::exponential_distribution<double> power(1.0 / mean_power);
  double x = power(rng);
  const double floor_linear = std::pow(10.0, kSnrFloorDb / 10.0);
  const double db = x > floor_linear ? 10.0 * std::log10(x) : kSnrFloorDb;
  return std::max(db, std::nextafter(kSnrFloorDb, 0.0));
}

std::int64_t QueueState::backlog_bits() const {
  std::int64_t total = 0;
  for (const auto& s : segments) total += s.bits;
  return total;
}

IntervalOutcome step_interval(QueueState& queue, const AllocationDecision& alloc,
                              double snr_db, std::int64_t offered_bits,
                              const SliceSpec& slice, double interval_s,
                              double sub_slot_s,
                              std::vector<SubSlotLatency>* per_sub_slot) {
  IntervalOutcome out;
  out.offered_bits = offered_bits;
  out.backlog_bits_start = queue.backlog_bits();

  const double rate = prb_throughput(alloc.prbs, snr_db);
  const double bound_s = slice.latency_bound_ms / 1000.0;
  const auto n_sub = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(interval_s / sub_slot_s - 1e-9)));

  FluidServer server(queue.segments, rate, bound_s);
  Tally total;
  std::int64_t arrived = 0;
  for (std::int64_t k = 0; k < n_sub; ++k) {
    const double t0 = static_cast<double>(k) * sub_slot_s;
    const double t1 = k + 1 == n_sub ? interval_s : t0 + sub_slot_s;
    const auto cumulative = static_cast<std::int64_t>(std::llround(
        static_cast<double>(offered_bits) * (t1 / interval_s)));
    const std::int64_t bits = (k + 1 == n_sub ? offered_bits : cumulative) - arrived;
    arrived += bits;
    if (bits > 0) queue.segments.push_back({bits, t0, t1});

    Tally slot;
    server.run(t0, t1, slot);
    total.served += slot.served;
    total.dropped += slot.dropped;
    total.latency_bit_s += slot.latency_bit_s;
    total.max_latency_s = std::max(total.max_latency_s, slot.max_latency_s);
    if (per_sub_slot) {
      per_sub_slot->push_back(
          {slot.served, slot.served > 0
                            ? 1000.0 * slot.latency_bit_s / static_cast<double>(slot.served)
                            : 0.0});
    }
  }

  for (auto& s : queue.segments) {
    s.arrival_start_s -= interval_s;
    s.arrival_end_s -= interval_s;
  }

  out.served_bits = total.served;
  out.dropped_bits = total.dropped;
  out.backlog_bits_end = queue.backlog_bits();
  out.mean_latency_ms =
      total.served > 0 ? 1000.0 * total.latency_bit_s / static_cast<double>(total.served)
                       : 0.0;
  out.max_latency_ms = 1000.0 * total.max_latency_s;
  return out;
}

}  // namespace fedslice
