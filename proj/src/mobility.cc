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

#include "fedslice/mobility.h"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fedslice {
namespace {

constexpr double kMinDistanceM = 1.0;

int draw_weighted(std::span<const int> ids, std::span<const double> weights,
                  Rng& rng) {
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  return ids[pick(rng)];
}

}  // namespace

void UserTrajectory::record(int bs_id, std::int64_t interval_index) {
  visits.push_back({bs_id, interval_index});
  ++visit_counts[bs_id];
}

int depr_step(UserTrajectory& user, std::span<const BaseStation> stations,
              std::span<const double> relevance, const EprParams& params,
              std::int64_t interval_index, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto visited = static_cast<double>(user.visit_counts.size());
  const double p_explore =
      visited > 0 ? params.p_new * std::pow(visited, -params.gamma) : 1.0;

  std::vector<int> ids;
  std::vector<double> weights;
  if (user.visits.empty() || unit(rng) < p_explore) {
    for (const auto& bs : stations) {
      if (user.visit_counts.count(bs.id)) continue;
      double w = relevance[bs.id];
      if (!user.visits.empty()) {
        const auto& from = stations[user.current_bs()].position;
        const double d = std::max(
            kMinDistanceM, std::hypot(bs.position.x - from.x, bs.position.y - from.y));
        w /= d * d;
      }
      if (w > 0.0) {
        ids.push_back(bs.id);
        weights.push_back(w);
      }
    }
  }
  if (ids.empty()) {
    // Preferential return (also the fallback when nothing is left to explore).
    for (const auto& [bs_id, count] : user.visit_counts) {
      ids.push_back(bs_id);
      weights.push_back(count);
    }
  }
  if (ids.empty()) {
    // First placement with all-zero relevance: uniform.
    for (const auto& bs : stations) {
      ids.push_back(bs.id);
      weights.push_back(1.0);
    }
  }
  const int next = draw_weighted(ids, weights, rng);
  user.record(next, interval_index);
  return next;
}

double radius_of_gyration(const UserTrajectory& user,
                          std::span<const BaseStation> stations) {
  double n = 0.0, cx = 0.0, cy = 0.0;
  for (const auto& [bs_id, count] : user.visit_counts) {
    n += count;
    cx += count * stations[bs_id].position.x;
    cy += count * stations[bs_id].position.y;
  }
  if (n == 0.0) return 0.0;
  cx /= n;
  cy /= n;
  double sum_sq = 0.0;
  for (const auto& [bs_id, count] : user.visit_counts) {
    const double dx = stations[bs_id].position.x - cx;
    const double dy = stations[bs_id].position.y - cy;
    sum_sq += count * (dx * dx + dy * dy);
  }
  return std::sqrt(sum_sq / n);
}

double temporal_weight(std::int64_t interval_index, double interval_s,
                       double peak_hour, double start_hour) {
  const double hour = start_hour + static_cast<double>(interval_index) * interval_s / 3600.0;
  const double phase = 2.0 * std::numbers::pi * (hour - peak_hour) / 24.0;
  return 0.6 + 0.4 * std::cos(phase);
}

std::int64_t generate_demand(int n_users, const SliceSpec& slice, double weight,
                             double unit_bits, Rng& rng) {
  if (n_users <= 0 || slice.mean_demand_units <= 0.0) return 0;
  // A sum of independent Poisson draws is Poisson with the summed mean.
  std::poisson_distribution<std::int64_t> units(n_users * slice.mean_demand_units);
  const double bits = static_cast<double>(units(rng)) * unit_bits * weight;
  return static_cast<std::int64_t>(std::llround(bits));
}

void write_demand_csv(std::ostream& out, std::span<const DemandSeries> series) {
  out << "interval_index,bs_id,slice_id,bits\n";
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.samples.size(); ++t) {
      out << t << ',' << s.bs_id << ',' << s.slice_id << ',' << std::llround(s.samples[t])
          << '\n';
    }
  }
}

std::vector<DemandSeries> read_demand_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("demand CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "interval_index,bs_id,slice_id,bits")
    throw std::runtime_error("unexpected demand CSV header: " + line);

  std::map<std::pair<int, int>, std::map<std::int64_t, double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::int64_t t = 0;
    int bs = 0, slice = 0;
    double bits = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> t >> c1 >> bs >> c2 >> slice >> c3 >> bits) || c1 != ',' ||
        c2 != ',' || c3 != ',' || t < 0 || bits < 0.0) {
      throw std::runtime_error("malformed demand CSV row " + std::to_string(line_no));
    }
    rows[{slice, bs}][t] = bits;
  }

  std::vector<DemandSeries> out;
  for (auto& [key, samples] : rows) {
    DemandSeries s;
    s.slice_id = key.first;
    s.bs_id = key.second;
    for (const auto& [t, bits] : samples) s.samples.push_back(bits);
    out.push_back(std::move(s));
  }
  return out;
}

MobilityTrace::MobilityTrace(const ScenarioConfig& cfg, std::int64_t n_intervals)
    : period_(cfg.traffic.mobility_period_intervals),
      n_slices_(static_cast<int>(cfg.slices.size())),
      n_bs_(static_cast<int>(cfg.base_stations.size())) {
  Rng rng = make_stream(cfg.rng_seed, "mobility");
  std::vector<double> relevance;
  for (const auto& bs : cfg.base_stations) relevance.push_back(bs.relevance);
  std::vector<double> shares;
  for (const auto& s : cfg.slices) shares.push_back(s.user_share);
  const bool any_share = std::any_of(shares.begin(), shares.end(),
                                     [](double w) { return w > 0.0; });
  std::discrete_distribution<int> slice_pick(shares.begin(), shares.end());
  const EprParams params{cfg.traffic.p_new, cfg.traffic.gamma_epr};

  users_.resize(any_share ? cfg.traffic.n_users : 0);
  for (std::size_t u = 0; u < users_.size(); ++u) {
    users_[u].user_id = static_cast<int>(u);
    users_[u].slice_id = slice_pick(rng);
    depr_step(users_[u], cfg.base_stations, relevance, params, 0, rng);
  }

  const std::int64_t n_steps = std::max<std::int64_t>(1, (n_intervals + period_ - 1) / period_);
  counts_.assign(n_steps, std::vector<int>(n_slices_ * n_bs_, 0));
  for (std::int64_t step = 0; step < n_steps; ++step) {
    if (step > 0) {
      for (auto& user : users_)
        depr_step(user, cfg.base_stations, relevance, params, step * period_, rng);
    }
    for (const auto& user : users_)
      ++counts_[step][user.slice_id * n_bs_ + user.current_bs()];
  }
}

int MobilityTrace::users_at(std::int64_t interval_index, int slice, int bs) const {
  auto step = static_cast<std::size_t>(interval_index / period_);
  if (step >= counts_.size()) step = counts_.size() - 1;
  return counts_[step][slice * n_bs_ + bs];
}

}  // namespace fedslice
