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

#ifndef FEDSLICE_MOBILITY_H_
#define FEDSLICE_MOBILITY_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "fedslice/domain.h"
#include "fedslice/rng.h"

namespace fedslice {

struct Visit {
  int bs_id = 0;
  std::int64_t interval_index = 0;
  bool operator==(const Visit&) const = default;
};

struct UserTrajectory {
  int user_id = 0;
  int slice_id = 0;
  std::vector<Visit> visits;
  std::map<int, int> visit_counts;

  int current_bs() const { return visits.back().bs_id; }
  void record(int bs_id, std::int64_t interval_index);
};

struct EprParams {
  double p_new = 0.6;
  double gamma = 0.21;
};

// One exploration-and-preferential-return move. With probability
// p_new * S^-gamma (S = distinct stations visited) the user explores an
// unvisited station drawn with weight relevance / distance^2 from its
// current station; otherwise it returns to a visited station drawn with
// weight equal to its visit count. The move is appended to `user`.
int depr_step(UserTrajectory& user, std::span<const BaseStation> stations,
              std::span<const double> relevance, const EprParams& params,
              std::int64_t interval_index, Rng& rng);

// Root-mean-square distance of the visited positions (weighted by visit
// counts) from their centroid, in meters.
double radius_of_gyration(const UserTrajectory& user,
                          std::span<const BaseStation> stations);

// Diurnal demand factor in [0.2, 1.0], 24 h periodic, 1.0 at `peak_hour`.
double temporal_weight(std::int64_t interval_index, double interval_s,
                       double peak_hour, double start_hour = 0.0);

// Offered bits of `n_users` users of one slice in one interval: the sum of
// per-user Poisson(mean_demand_units) draws, in units of `unit_bits`,
// scaled by the diurnal weight.
std::int64_t generate_demand(int n_users, const SliceSpec& slice, double weight,
                             double unit_bits, Rng& rng);

// Per-interval offered traffic of one (slice, BS) pair.
struct DemandSeries {
  int slice_id = 0;
  int bs_id = 0;
  std::vector<double> samples;
  bool operator==(const DemandSeries&) const = default;
};

// CSV with header `interval_index,bs_id,slice_id,bits`.
void write_demand_csv(std::ostream& out, std::span<const DemandSeries> series);
// Groups rows by (slice, bs), ordered by slice then bs, samples ordered by
// interval index. Throws std::runtime_error on malformed rows.
std::vector<DemandSeries> read_demand_csv(std::istream& in);

// Offline user movement for a whole run. Users are assigned to slices by
// `user_share`, start at a station drawn by relevance, and take one d-EPR
// step every `mobility_period_intervals`.
class MobilityTrace {
 public:
  MobilityTrace(const ScenarioConfig& cfg, std::int64_t n_intervals);

  // Users of `slice` attached to `bs` during `interval_index`.
  int users_at(std::int64_t interval_index, int slice, int bs) const;
  int total_users() const { return static_cast<int>(users_.size()); }
  const std::vector<UserTrajectory>& users() const { return users_; }

 private:
  int period_;
  int n_slices_;
  int n_bs_;
  std::vector<UserTrajectory> users_;
  // counts_[step][slice * n_bs + bs]
  std::vector<std::vector<int>> counts_;
};

}  // namespace fedslice

#endif  // FEDSLICE_MOBILITY_H_
