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

#ifndef FEDSLICE_FEDERATION_H_
#define FEDSLICE_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fedslice/clustering.h"
#include "fedslice/domain.h"
#include "fedslice/neural.h"
#include "fedslice/rng.h"

namespace fedslice {

// Elementwise mean. Throws std::invalid_argument on an empty list or
// mismatched shapes.
ModelParams fed_average(std::span<const ModelParams> models);

// Sum of weights[k] * models[k].
ModelParams weighted_sum(std::span<const ModelParams> models, std::span<const double> weights);

inline constexpr double kRewardShift = 1e-6;

// Normalized cumulative rewards. When any reward is <= 0 all rewards are
// shifted by (-min + 1e-6) first; all-equal rewards give uniform weights.
std::vector<double> reward_weights(std::span<const double> rewards);

struct Upload {
  ModelParams model;
  double reward = 0.0;  // cumulative reward over the past federation episode
};

// Inputs of one slice's aggregation. `clusters.labels` is indexed by
// bs_id; every clustered BS must have an entry in `uploads`.
struct FederationRound {
  int slice_id = 0;
  int episode_index = 0;
  Strategy strategy = Strategy::kFullCluster;
  std::map<int, Upload> uploads;
  ClusterAssignment clusters;
};

// Reward-weighted model per cluster. `literal` keeps the extra
// 1/|cluster| prefactor of the printed rule (shrinks the parameters).
std::map<int, ModelParams> fed_full_cluster(const FederationRound& round, bool literal = false);

enum class RepresentativeMode { kRandom, kBest };

struct RepresentativeResult {
  ModelParams model;
  std::vector<int> representatives;  // bs ids, one per cluster
  bool fallback = false;             // no cluster: plain average of all uploads
};

// One delegate per cluster (uniform draw or highest reward, lowest bs id on
// ties), combined with reward weights. The result goes to every BS.
RepresentativeResult fed_representative(const FederationRound& round, RepresentativeMode mode,
                                        Rng& rng);

struct OverheadRecord {
  int episode_index = 0;
  int slice_id = 0;
  Strategy strategy = Strategy::kFdrl;
  std::int64_t uplink_models = 0;
  std::int64_t downlink_models = 0;
  std::int64_t uplink_bytes = 0;
  std::int64_t downlink_bytes = 0;
  bool fallback = false;
  bool operator==(const OverheadRecord&) const = default;
};

// Model exchange volume of one round:
//   FDRL          up n_bs,              down n_bs
//   FullCluster   up clustered BSs,     down clustered BSs
//   Random/Best   up one per cluster,   down n_bs (FDRL counts if no cluster)
//   NoFederation  nothing
OverheadRecord account_overhead(Strategy strategy, const ClusterAssignment& clusters,
                                std::size_t n_bs, std::size_t model_bytes,
                                int episode_index = 0, int slice_id = 0);

}  // namespace fedslice

#endif  // FEDSLICE_FEDERATION_H_
