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

#include "fedslice/cli.h"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fedslice/agent.h"
#include "fedslice/clustering.h"
#include "fedslice/config_io.h"
#include "fedslice/metrics_io.h"
#include "fedslice/mobility.h"
#include "fedslice/simulation.h"

#ifndef FEDSLICE_VERSION
#define FEDSLICE_VERSION "dev"
#endif

namespace fedslice {
namespace {

namespace fs = std::filesystem;

void print_issues(std::ostream& err, const ConfigError& e) {
  err << "invalid scenario configuration:\n";
  for (const auto& issue : e.issues()) err << "  " << issue.path << ": " << issue.message << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  fn(out);
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

}  // namespace

std::string_view version() { return FEDSLICE_VERSION; }

void configure_logging() {
  const char* level = std::getenv("FEDSLICE_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

int cmd_run(const RunOptions& options, std::ostream& err) {
  if (!fs::is_regular_file(options.config_path)) {
    err << "cannot read config file: " << options.config_path.string() << '\n';
    return kExitUnreadable;
  }
  ScenarioConfig cfg;
  try {
    cfg = load_config(options.config_path);
    if (options.seed) cfg.rng_seed = *options.seed;
    if (options.strategy) cfg.strategy = *options.strategy;
    if (options.episodes) cfg.total_episodes = *options.episodes;
    if (options.threads) cfg.num_threads = *options.threads;
    require_valid(cfg);
  } catch (const ConfigError& e) {
    print_issues(err, e);
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitUnreadable;
  }

  try {
    fs::create_directories(options.out_dir);
    const fs::path metrics = options.out_dir / "metrics.csv";
    const fs::path overhead = options.out_dir / "overhead.csv";
    const fs::path latency = options.out_dir / "latency_samples.csv";
    const fs::path clusters = options.out_dir / "clusters.csv";

    nlohmann::ordered_json manifest;
    manifest["version"] = std::string(version());
    manifest["started_at"] = utc_timestamp();
    manifest["seed"] = cfg.rng_seed;
    manifest["strategy"] = std::string(to_string(cfg.strategy));
    manifest["config_path"] = options.config_path.string();
    manifest["config"] = serialize_config(cfg);
    manifest["outputs"] = {{"metrics", metrics.string()},
                           {"overhead", overhead.string()},
                           {"latency_samples", latency.string()},
                           {"clusters", clusters.string()}};
    write_file(options.out_dir / "manifest.json",
               [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });

    Simulation sim(cfg);
    const SimulationMetrics m = sim.run();
    write_file(metrics, [&](std::ostream& out) { write_metrics_csv(out, cfg, m); });
    write_file(overhead, [&](std::ostream& out) { write_overhead_csv(out, cfg, m); });
    write_file(latency, [&](std::ostream& out) { write_latency_csv(out, cfg, m); });
    write_file(clusters, [&](std::ostream& out) { write_cluster_csv(out, cfg, m); });

    if (options.checkpoints) {
      const fs::path dir = options.out_dir / "checkpoints";
      fs::create_directories(dir);
      for (const auto& slice : cfg.slices) {
        for (const auto& bs : cfg.base_stations) {
          const auto name = "agent-" + std::to_string(slice.id) + "-" + std::to_string(bs.id) + ".bin";
          write_file(dir / name, [&](std::ostream& out) {
            save_agent_checkpoint(out, sim.agent(slice.id, bs.id),
                                  static_cast<std::uint32_t>(cfg.total_episodes));
          });
        }
      }
    }
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_cluster(const ClusterOptions& options, std::ostream& out, std::ostream& err) {
  std::ifstream in(options.input);
  if (!in) {
    err << "cannot read demand file: " << options.input.string() << '\n';
    return kExitUnreadable;
  }
  std::vector<DemandSeries> series;
  try {
    series = read_demand_csv(in);
  } catch (const std::exception& e) {
    err << options.input.string() << ": " << e.what() << '\n';
    return kExitInvalid;
  }

  std::map<int, std::vector<DemandSeries>> by_slice;
  for (auto& s : series) by_slice[s.slice_id].push_back(std::move(s));

  std::ostringstream labels;
  labels << "bs_id,slice_id,label\n";
  for (const auto& [slice, group] : by_slice) {
    ClusterAssignment assignment;
    try {
      assignment = dbscan(distance_matrix(group, options.window), options.eps, options.n_min);
    } catch (const std::invalid_argument& e) {
      err << options.input.string() << ": slice " << slice << ": " << e.what() << '\n';
      return kExitInvalid;
    }
    for (std::size_t i = 0; i < group.size(); ++i)
      labels << group[i].bs_id << ',' << slice << ',' << assignment.labels[i] << '\n';
  }

  if (options.output) {
    std::ofstream file(*options.output);
    if (!(file << labels.str())) {
      err << "cannot write " << options.output->string() << '\n';
      return kExitFailure;
    }
  } else {
    out << labels.str();
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Federated slice resource allocation simulator"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  RunOptions run;
  std::string strategy;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and export metrics");
  run_cmd->add_option("--config", run.config_path, "Scenario YAML file")->required();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
  run_cmd->add_option("--strategy", strategy,
                      "FDRL, FullCluster, RandomRep, BestRep or NoFederation");
  run_cmd->add_option("--episodes", run.episodes, "Override total_episodes")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--checkpoints", run.checkpoints, "Save final agent models");

  ClusterOptions cluster;
  std::string cluster_out;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster demand traces with DTW + DBSCAN");
  cluster_cmd->add_option("--input", cluster.input, "Demand CSV")->required();
  cluster_cmd->add_option("--eps", cluster.eps, "DBSCAN radius")->required();
  cluster_cmd->add_option("--min", cluster.n_min, "DBSCAN minimum points")
      ->required()
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--window", cluster.window, "Sakoe-Chiba half-width (0 = none)");
  cluster_cmd->add_option("--output", cluster_out, "Labels CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*run_cmd) {
    if (!strategy.empty()) {
      run.strategy = parse_strategy(strategy);
      if (!run.strategy) {
        std::cerr << "unknown strategy: " << strategy << '\n';
        return kExitInvalid;
      }
    }
    return cmd_run(run, std::cerr);
  }
  if (!cluster_out.empty()) cluster.output = cluster_out;
  return cmd_cluster(cluster, std::cout, std::cerr);
}

}  // namespace fedslice
