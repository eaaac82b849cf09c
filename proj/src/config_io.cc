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

#include "fedslice/config_io.h"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace fedslice {
namespace {

class Reader {
 public:
  std::vector<ConfigIssue> issues;

  template <typename T>
  void get(const YAML::Node& node, const std::string& key, T& out,
           const std::string& path) {
    const YAML::Node child = node[key];
    if (!child) return;
    try {
      out = child.as<T>();
    } catch (const YAML::Exception&) {
      issues.push_back({path + key, "malformed value"});
    }
  }

  void allow_only(const YAML::Node& node, std::set<std::string> keys,
                  const std::string& path) {
    if (!node) return;
    if (!node.IsMap()) {
      issues.push_back({path.empty() ? "<root>" : path, "expected a mapping"});
      return;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) issues.push_back({path + key, "unknown key"});
    }
  }
};

void read_slice(Reader& r, const YAML::Node& node, std::size_t index,
                SliceSpec& s) {
  const std::string path = "slices[" + std::to_string(index) + "].";
  r.allow_only(node,
               {"id", "name", "latency_bound_ms", "penalty_coeff",
                "chunk_prbs", "priority", "user_share", "mean_demand_units",
                "constant_offered_bits"},
               path);
  s.id = static_cast<int>(index);
  s.priority = static_cast<int>(index);
  r.get(node, "id", s.id, path);
  r.get(node, "name", s.name, path);
  r.get(node, "latency_bound_ms", s.latency_bound_ms, path);
  r.get(node, "penalty_coeff", s.penalty_coeff, path);
  r.get(node, "chunk_prbs", s.chunk_prbs, path);
  r.get(node, "priority", s.priority, path);
  r.get(node, "user_share", s.user_share, path);
  r.get(node, "mean_demand_units", s.mean_demand_units, path);
  if (node["constant_offered_bits"]) {
    std::int64_t bits = 0;
    r.get(node, "constant_offered_bits", bits, path);
    s.constant_offered_bits = bits;
  }
}

void read_base_station(Reader& r, const YAML::Node& node, std::size_t index,
                       const TrafficConfig& traffic, BaseStation& bs) {
  const std::string path = "base_stations[" + std::to_string(index) + "].";
  r.allow_only(node,
               {"id", "capacity_prbs", "x", "y", "profile", "relevance"},
               path);
  bs.id = static_cast<int>(index);
  r.get(node, "id", bs.id, path);
  r.get(node, "capacity_prbs", bs.capacity_prbs, path);
  r.get(node, "x", bs.position.x, path);
  r.get(node, "y", bs.position.y, path);
  r.get(node, "relevance", bs.relevance, path);
  if (const YAML::Node p = node["profile"]) {
    int as_index = 0;
    if (YAML::convert<int>::decode(p, as_index)) {
      bs.profile = as_index;
    } else {
      const auto name = p.as<std::string>();
      bs.profile = -1;
      for (std::size_t k = 0; k < traffic.profiles.size(); ++k) {
        if (traffic.profiles[k].name == name) bs.profile = static_cast<int>(k);
      }
      if (bs.profile < 0) r.issues.push_back({path + "profile", "unknown profile '" + name + "'"});
    }
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError({ConfigIssue{"<document>", std::string("YAML syntax error: ") + e.what()}});
  }
  ScenarioConfig cfg;
  Reader r;
  if (!root || root.IsNull()) throw ConfigError({ConfigIssue{"<document>", "empty document"}});
  r.allow_only(root,
               {"seed", "timing", "federation", "clustering", "slices",
                "base_stations", "layout", "traffic", "learning", "runtime"},
               "");

  r.get(root, "seed", cfg.rng_seed, "");

  if (const YAML::Node t = root["timing"]) {
    r.allow_only(t,
                 {"decision_interval_s", "sub_slot_s", "epochs_per_episode",
                  "federation_period_episodes", "total_episodes"},
                 "timing.");
    r.get(t, "decision_interval_s", cfg.decision_interval_s, "timing.");
    r.get(t, "sub_slot_s", cfg.sub_slot_s, "timing.");
    r.get(t, "epochs_per_episode", cfg.epochs_per_episode, "timing.");
    r.get(t, "federation_period_episodes", cfg.federation_period_episodes, "timing.");
    r.get(t, "total_episodes", cfg.total_episodes, "timing.");
  }

  if (const YAML::Node f = root["federation"]) {
    r.allow_only(f, {"strategy", "full_cluster_literal"}, "federation.");
    if (f["strategy"]) {
      const auto text = f["strategy"].as<std::string>();
      if (auto s = parse_strategy(text)) {
        cfg.strategy = *s;
      } else {
        r.issues.push_back({"federation.strategy", "unknown strategy '" + text + "'"});
      }
    }
    r.get(f, "full_cluster_literal", cfg.full_cluster_literal, "federation.");
  }

  if (const YAML::Node c = root["clustering"]) {
    r.allow_only(c, {"eps_d", "n_min", "dtw_window_samples", "lookback_intervals"},
                 "clustering.");
    r.get(c, "eps_d", cfg.clustering.eps_d, "clustering.");
    r.get(c, "n_min", cfg.clustering.n_min, "clustering.");
    r.get(c, "dtw_window_samples", cfg.clustering.dtw_window_samples, "clustering.");
    r.get(c, "lookback_intervals", cfg.clustering.lookback_intervals, "clustering.");
  }

  if (const YAML::Node t = root["traffic"]) {
    auto& tr = cfg.traffic;
    r.allow_only(t,
                 {"n_users", "unit_bits", "snr_mean_db", "rayleigh_fading",
                  "start_hour", "profiles", "mobility_period_intervals",
                  "p_new", "gamma_epr"},
                 "traffic.");
    r.get(t, "n_users", tr.n_users, "traffic.");
    r.get(t, "unit_bits", tr.unit_bits, "traffic.");
    r.get(t, "snr_mean_db", tr.snr_mean_db, "traffic.");
    r.get(t, "rayleigh_fading", tr.rayleigh_fading, "traffic.");
    r.get(t, "start_hour", tr.start_hour, "traffic.");
    r.get(t, "mobility_period_intervals", tr.mobility_period_intervals, "traffic.");
    r.get(t, "p_new", tr.p_new, "traffic.");
    r.get(t, "gamma_epr", tr.gamma_epr, "traffic.");
    if (const YAML::Node ps = t["profiles"]) {
      tr.profiles.clear();
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const std::string path = "traffic.profiles[" + std::to_string(k) + "].";
        r.allow_only(ps[k], {"name", "peak_hour"}, path);
        DiurnalProfile p;
        r.get(ps[k], "name", p.name, path);
        r.get(ps[k], "peak_hour", p.peak_hour, path);
        tr.profiles.push_back(p);
      }
    }
  }

  if (const YAML::Node l = root["learning"]) {
    auto& lc = cfg.learning;
    r.allow_only(l,
                 {"gamma", "learning_rate", "buffer_size", "batch_size",
                  "epsilon_start", "epsilon_floor", "epsilon_floor_fraction",
                  "hidden_layers", "optimizer", "double_q", "reward_mode",
                  "lower_branch", "train_steps_per_interval", "state_scale",
                  "explore_feasible"},
                 "learning.");
    r.get(l, "gamma", lc.gamma, "learning.");
    r.get(l, "learning_rate", lc.learning_rate, "learning.");
    r.get(l, "buffer_size", lc.buffer_size, "learning.");
    r.get(l, "batch_size", lc.batch_size, "learning.");
    r.get(l, "epsilon_start", lc.epsilon_start, "learning.");
    r.get(l, "epsilon_floor", lc.epsilon_floor, "learning.");
    r.get(l, "epsilon_floor_fraction", lc.epsilon_floor_fraction, "learning.");
    r.get(l, "hidden_layers", lc.hidden_layers, "learning.");
    r.get(l, "double_q", lc.double_q, "learning.");
    r.get(l, "train_steps_per_interval", lc.train_steps_per_interval, "learning.");
    r.get(l, "explore_feasible", lc.explore_feasible, "learning.");
    if (l["optimizer"]) {
      const auto text = l["optimizer"].as<std::string>();
      if (text == "adam") lc.optimizer = Optimizer::kAdam;
      else if (text == "sgd") lc.optimizer = Optimizer::kSgd;
      else r.issues.push_back({"learning.optimizer", "expected adam or sgd"});
    }
    if (l["reward_mode"]) {
      const auto text = l["reward_mode"].as<std::string>();
      if (text == "normalized") lc.reward_mode = RewardMode::kNormalized;
      else if (text == "literal") lc.reward_mode = RewardMode::kLiteral;
      else r.issues.push_back({"learning.reward_mode", "expected normalized or literal"});
    }
    if (l["state_scale"]) {
      const auto text = l["state_scale"].as<std::string>();
      if (text == "percentile") lc.state_scale = StateScale::kPercentile;
      else if (text == "capacity") lc.state_scale = StateScale::kCapacity;
      else r.issues.push_back({"learning.state_scale", "expected percentile or capacity"});
    }
    if (l["lower_branch"]) {
      const auto text = l["lower_branch"].as<std::string>();
      if (text == "magnitude") lc.lower_branch = LowerBranch::kMagnitude;
      else if (text == "printed") lc.lower_branch = LowerBranch::kPrinted;
      else r.issues.push_back({"learning.lower_branch", "expected magnitude or printed"});
    }
  }

  if (const YAML::Node rt = root["runtime"]) {
    r.allow_only(rt, {"num_threads"}, "runtime.");
    r.get(rt, "num_threads", cfg.num_threads, "runtime.");
  }

  if (const YAML::Node ss = root["slices"]) {
    if (!ss.IsSequence()) {
      r.issues.push_back({"slices", "expected a list"});
    } else {
      for (std::size_t i = 0; i < ss.size(); ++i) {
        SliceSpec s;
        read_slice(r, ss[i], i, s);
        cfg.slices.push_back(s);
      }
    }
  }

  if (root["base_stations"] && root["layout"]) {
    r.issues.push_back({"layout", "give either base_stations or layout, not both"});
  }
  if (const YAML::Node bs = root["base_stations"]) {
    if (!bs.IsSequence()) {
      r.issues.push_back({"base_stations", "expected a list"});
    } else {
      for (std::size_t b = 0; b < bs.size(); ++b) {
        BaseStation station;
        read_base_station(r, bs[b], b, cfg.traffic, station);
        cfg.base_stations.push_back(station);
      }
    }
  } else if (const YAML::Node lay = root["layout"]) {
    r.allow_only(lay, {"count", "capacity_prbs", "area_m"}, "layout.");
    int count = 0;
    int capacity = 100;
    double area = 3000.0;
    r.get(lay, "count", count, "layout.");
    r.get(lay, "capacity_prbs", capacity, "layout.");
    r.get(lay, "area_m", area, "layout.");
    cfg.base_stations =
        generate_layout(count, capacity, area,
                        static_cast<int>(cfg.traffic.profiles.size()),
                        cfg.rng_seed);
  }

  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.rng_seed;

  out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "decision_interval_s" << YAML::Value << cfg.decision_interval_s;
  out << YAML::Key << "sub_slot_s" << YAML::Value << cfg.sub_slot_s;
  out << YAML::Key << "epochs_per_episode" << YAML::Value << cfg.epochs_per_episode;
  out << YAML::Key << "federation_period_episodes" << YAML::Value
      << cfg.federation_period_episodes;
  out << YAML::Key << "total_episodes" << YAML::Value << cfg.total_episodes;
  out << YAML::EndMap;

  out << YAML::Key << "federation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "strategy" << YAML::Value << std::string(to_string(cfg.strategy));
  out << YAML::Key << "full_cluster_literal" << YAML::Value << cfg.full_cluster_literal;
  out << YAML::EndMap;

  const auto& c = cfg.clustering;
  out << YAML::Key << "clustering" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "eps_d" << YAML::Value << c.eps_d;
  out << YAML::Key << "n_min" << YAML::Value << c.n_min;
  out << YAML::Key << "dtw_window_samples" << YAML::Value << c.dtw_window_samples;
  out << YAML::Key << "lookback_intervals" << YAML::Value << c.lookback_intervals;
  out << YAML::EndMap;

  const auto& t = cfg.traffic;
  out << YAML::Key << "traffic" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_users" << YAML::Value << t.n_users;
  out << YAML::Key << "unit_bits" << YAML::Value << t.unit_bits;
  out << YAML::Key << "snr_mean_db" << YAML::Value << t.snr_mean_db;
  out << YAML::Key << "rayleigh_fading" << YAML::Value << t.rayleigh_fading;
  out << YAML::Key << "start_hour" << YAML::Value << t.start_hour;
  out << YAML::Key << "mobility_period_intervals" << YAML::Value
      << t.mobility_period_intervals;
  out << YAML::Key << "p_new" << YAML::Value << t.p_new;
  out << YAML::Key << "gamma_epr" << YAML::Value << t.gamma_epr;
  out << YAML::Key << "profiles" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : t.profiles) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << p.name;
    out << YAML::Key << "peak_hour" << YAML::Value << p.peak_hour;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  const auto& l = cfg.learning;
  out << YAML::Key << "learning" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma" << YAML::Value << l.gamma;
  out << YAML::Key << "learning_rate" << YAML::Value << l.learning_rate;
  out << YAML::Key << "buffer_size" << YAML::Value << l.buffer_size;
  out << YAML::Key << "batch_size" << YAML::Value << l.batch_size;
  out << YAML::Key << "epsilon_start" << YAML::Value << l.epsilon_start;
  out << YAML::Key << "epsilon_floor" << YAML::Value << l.epsilon_floor;
  out << YAML::Key << "epsilon_floor_fraction" << YAML::Value << l.epsilon_floor_fraction;
  out << YAML::Key << "hidden_layers" << YAML::Value << YAML::Flow << l.hidden_layers;
  out << YAML::Key << "optimizer" << YAML::Value
      << (l.optimizer == Optimizer::kAdam ? "adam" : "sgd");
  out << YAML::Key << "double_q" << YAML::Value << l.double_q;
  out << YAML::Key << "train_steps_per_interval" << YAML::Value << l.train_steps_per_interval;
  out << YAML::Key << "explore_feasible" << YAML::Value << l.explore_feasible;
  out << YAML::Key << "reward_mode" << YAML::Value
      << (l.reward_mode == RewardMode::kNormalized ? "normalized" : "literal");
  out << YAML::Key << "lower_branch" << YAML::Value
      << (l.lower_branch == LowerBranch::kMagnitude ? "magnitude" : "printed");
  out << YAML::Key << "state_scale" << YAML::Value
      << (l.state_scale == StateScale::kPercentile ? "percentile" : "capacity");
  out << YAML::EndMap;

  out << YAML::Key << "runtime" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "num_threads" << YAML::Value << cfg.num_threads;
  out << YAML::EndMap;

  out << YAML::Key << "slices" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : cfg.slices) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << s.id;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "latency_bound_ms" << YAML::Value << s.latency_bound_ms;
    out << YAML::Key << "penalty_coeff" << YAML::Value << s.penalty_coeff;
    out << YAML::Key << "chunk_prbs" << YAML::Value << s.chunk_prbs;
    out << YAML::Key << "priority" << YAML::Value << s.priority;
    out << YAML::Key << "user_share" << YAML::Value << s.user_share;
    out << YAML::Key << "mean_demand_units" << YAML::Value << s.mean_demand_units;
    if (s.constant_offered_bits)
      out << YAML::Key << "constant_offered_bits" << YAML::Value << *s.constant_offered_bits;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "base_stations" << YAML::Value << YAML::BeginSeq;
  for (const auto& bs : cfg.base_stations) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << bs.id;
    out << YAML::Key << "capacity_prbs" << YAML::Value << bs.capacity_prbs;
    out << YAML::Key << "x" << YAML::Value << bs.position.x;
    out << YAML::Key << "y" << YAML::Value << bs.position.y;
    out << YAML::Key << "profile" << YAML::Value << bs.profile;
    out << YAML::Key << "relevance" << YAML::Value << bs.relevance;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fedslice
