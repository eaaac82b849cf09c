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

#include "fedslice/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fedslice {

std::vector<double> normalize_series(std::span<const double> series) {
  std::vector<double> out(series.size(), 0.0);
  if (series.empty()) return out;
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = std::clamp((series[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

double dtw(std::span<const double> a, std::span<const double> b, std::size_t window) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 || m == 0) throw std::invalid_argument("dtw: empty series");
  const std::size_t diff = n > m ? n - m : m - n;
  const std::size_t band = window == 0 ? std::max(n, m) : std::max(window, diff);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Two rolling rows over b, indexed 1..m; column 0 is the boundary.
  std::vector<double> prev(m + 1, kInf), cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), kInf);
    const std::size_t j_lo = i > band ? i - band : 1;
    const std::size_t j_hi = std::min(m, i + band);
    for (std::size_t j = std::max<std::size_t>(j_lo, 1); j <= j_hi; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::abs(a[i - 1] - b[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[m] / static_cast<double>(n + m);
}

DistanceMatrix distance_matrix(std::span<const std::vector<double>> series,
                               std::size_t window) {
  const std::size_t n = series.size();
  for (const auto& s : series) {
    if (s.size() != series.front().size())
      throw std::invalid_argument("distance_matrix: series lengths differ");
    if (s.empty()) throw std::invalid_argument("distance_matrix: empty series");
  }
  std::vector<std::vector<double>> normalized;
  normalized.reserve(n);
  for (const auto& s : series) normalized.push_back(normalize_series(s));
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, dtw(normalized[i], normalized[j], window));
  }
  return d;
}

DistanceMatrix distance_matrix(std::span<const DemandSeries> series, std::size_t window) {
  std::vector<std::vector<double>> raw;
  raw.reserve(series.size());
  for (const auto& s : series) raw.push_back(s.samples);
  return distance_matrix(std::span<const std::vector<double>>(raw), window);
}

std::vector<std::size_t> ClusterAssignment::members(int cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.push_back(i);
  }
  return out;
}

std::size_t ClusterAssignment::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

ClusterAssignment dbscan(const DistanceMatrix& d, double eps, int n_min) {
  const std::size_t n = d.size();
  constexpr int kUnvisited = -2;
  ClusterAssignment out;
  out.labels.assign(n, kUnvisited);

  auto neighbours = [&](std::size_t p) {
    std::vector<std::size_t> nb;
    for (std::size_t q = 0; q < n; ++q) {
      if (d(p, q) <= eps) nb.push_back(q);
    }
    return nb;
  };

  for (std::size_t p = 0; p < n; ++p) {
    if (out.labels[p] != kUnvisited) continue;
    auto seeds = neighbours(p);
    if (static_cast<int>(seeds.size()) < n_min) {
      out.labels[p] = kNoise;  // may become a border point later
      continue;
    }
    const int cluster = out.n_clusters++;
    out.labels[p] = cluster;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const std::size_t q = seeds[k];
      if (out.labels[q] == kNoise) out.labels[q] = cluster;
      if (out.labels[q] != kUnvisited) continue;
      out.labels[q] = cluster;
      auto more = neighbours(q);
      if (static_cast<int>(more.size()) >= n_min) {
        seeds.insert(seeds.end(), more.begin(), more.end());
      }
    }
  }
  return out;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& d, std::span<const int> ids) {
  out << "i,j,distance\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i; j < d.size(); ++j) {
      out << ids[i] << ',' << ids[j] << ',' << d(i, j) << '\n';
    }
  }
}

}  // namespace fedslice
