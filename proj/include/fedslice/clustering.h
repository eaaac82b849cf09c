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

#ifndef FEDSLICE_CLUSTERING_H_
#define FEDSLICE_CLUSTERING_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fedslice/mobility.h"

namespace fedslice {

// Min-max scaling to [0, 1]; a constant series maps to all zeros.
std::vector<double> normalize_series(std::span<const double> series);

// Dynamic time warping with absolute-difference cost, divided by
// len(a) + len(b). `window` is the Sakoe-Chiba half-width in samples
// (0 = unbounded); it is widened to |len(a) - len(b)| when needed so that
// a warping path always exists.
double dtw(std::span<const double> a, std::span<const double> b, std::size_t window);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  // Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Pairwise DTW over min-max normalized series. All series must have the
// same length (std::invalid_argument otherwise). Row order follows input.
DistanceMatrix distance_matrix(std::span<const std::vector<double>> series,
                               std::size_t window);
DistanceMatrix distance_matrix(std::span<const DemandSeries> series, std::size_t window);

inline constexpr int kNoise = -1;

struct ClusterAssignment {
  std::vector<int> labels;  // per point; kNoise or 0..n_clusters-1
  int n_clusters = 0;

  std::vector<std::size_t> members(int cluster) const;
  std::size_t noise_count() const;
  bool operator==(const ClusterAssignment&) const = default;
};

// DBSCAN on a precomputed matrix. A point is core when at least `n_min`
// points (itself included) lie within `eps` (inclusive). Points are
// visited in index order; a border point joins the first cluster that
// reaches it.
ClusterAssignment dbscan(const DistanceMatrix& d, double eps, int n_min);

// `i,j,distance` rows (upper triangle including diagonal).
void write_distance_csv(std::ostream& out, const DistanceMatrix& d,
                        std::span<const int> ids);

}  // namespace fedslice

#endif  // FEDSLICE_CLUSTERING_H_
