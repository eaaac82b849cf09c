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

#ifndef FEDSLICE_CLI_H_
#define FEDSLICE_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fedslice/domain.h"

namespace fedslice {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUnreadable = 2;
inline constexpr int kExitInvalid = 3;

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<Strategy> strategy;
  std::optional<int> episodes;
  std::optional<int> threads;
  // Writes every agent's final model to <out>/checkpoints.
  bool checkpoints = false;
};

// Validates the scenario, writes manifest.json, runs the simulation and
// writes metrics.csv, overhead.csv, latency_samples.csv and clusters.csv.
int cmd_run(const RunOptions& options, std::ostream& err);

struct ClusterOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;  // stdout when unset
  double eps = 0.06;
  int n_min = 2;
  std::size_t window = 0;
};

// Clusters every slice's traces of a demand CSV. Writes `bs_id,slice_id,label`.
int cmd_cluster(const ClusterOptions& options, std::ostream& out, std::ostream& err);

// Reads FEDSLICE_LOG (trace, debug, info, warn, error, off).
void configure_logging();

int run_cli(int argc, char** argv);

std::string_view version();

}  // namespace fedslice

#endif  // FEDSLICE_CLI_H_
