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

// Independent reference implementations used by the tests. Nothing here
// calls into the library except for plain data types.

#ifndef FEDSLICE_TESTS_ORACLES_H_
#define FEDSLICE_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Enumerates every monotone warping path from (0,0) to (n-1,m-1) whose
// cells satisfy |i - j| <= band, and returns the cheapest path sum over
// n + m. Costs are added in path order.
inline double dtw_bruteforce(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t window) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long diff = std::labs(n - m);
  const long band = window == 0 ? std::max(n, m) : std::max(static_cast<long>(window), diff);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(long, long, double)> walk = [&](long i, long j, double acc) {
    if (std::labs(i - j) > band) return;
    acc += std::fabs(a[i] - b[j]);
    if (i == n - 1 && j == m - 1) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < n) walk(i + 1, j, acc);
    if (j + 1 < m) walk(i, j + 1, acc);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best / static_cast<double>(n + m);
}

// DBSCAN without seed expansion: core points, connected components of the
// core graph numbered by their smallest index, then each non-core point
// joins the lowest-numbered component with a core point in range.
inline std::vector<int> dbscan_naive(const std::vector<std::vector<double>>& d, double eps,
                                     int n_min) {
  const std::size_t n = d.size();
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) count += d[i][j] <= eps ? 1 : 0;
    core[i] = count >= n_min;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (core[i] && core[j] && d[i][j] <= eps) {
        auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<int> label(n, -1);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    auto r = find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    label[i] = root_label[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (std::size_t j = 0; j < n; ++j)
      if (core[j] && d[i][j] <= eps && (best < 0 || label[j] < best)) best = label[j];
    label[i] = best;
  }
  return label;
}

struct FluidResult {
  double served = 0.0;
  double dropped = 0.0;
  double backlog = 0.0;
};

// Time-stepped fluid FIFO: constant arrival rate, constant service rate,
// fluid older than `deadline_s` is discarded. Each step of `dt` is one
// bucket of fluid.
inline FluidResult fluid_queue(double arrival_rate, double service_rate, double deadline_s,
                               double horizon_s, double dt) {
  struct Bucket {
    double born;
    double amount;
  };
  std::deque<Bucket> q;
  FluidResult r;
  const auto steps = static_cast<long>(std::llround(horizon_s / dt));
  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    q.push_back({t, arrival_rate * dt});
    while (!q.empty() && t + dt - q.front().born > deadline_s) {
      r.dropped += q.front().amount;
      q.pop_front();
    }
    double budget = service_rate * dt;
    while (budget > 0.0 && !q.empty()) {
      const double take = std::min(budget, q.front().amount);
      q.front().amount -= take;
      budget -= take;
      r.served += take;
      if (q.front().amount <= 0.0) q.pop_front();
    }
  }
  for (const auto& b : q) r.backlog += b.amount;
  return r;
}

// Plain re-implementation of the ReLU MLP in the library layout.
inline std::vector<double> mlp_forward(const std::vector<int>& sizes,
                                       const std::vector<double>& w,
                                       const std::vector<double>& x) {
  std::vector<double> act = x;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    std::vector<double> next(out, 0.0);
    for (int o = 0; o < out; ++o) {
      double z = w[off + static_cast<std::size_t>(in) * out + o];
      for (int i = 0; i < in; ++i) z += w[off + static_cast<std::size_t>(o) * in + i] * act[i];
      next[o] = (l + 2 < sizes.size()) ? std::max(0.0, z) : z;
    }
    off += static_cast<std::size_t>(in) * out + out;
    act = std::move(next);
  }
  return act;
}

// Smallest |pre-activation| over all hidden units; used to avoid ReLU
// kinks when differencing.
inline double min_hidden_preactivation(const std::vector<int>& sizes,
                                       const std::vector<double>& w,
                                       const std::vector<double>& x) {
  double smallest = std::numeric_limits<double>::infinity();
  std::vector<double> act = x;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 2 < sizes.size(); ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    std::vector<double> next(out, 0.0);
    for (int o = 0; o < out; ++o) {
      double z = w[off + static_cast<std::size_t>(in) * out + o];
      for (int i = 0; i < in; ++i) z += w[off + static_cast<std::size_t>(o) * in + i] * act[i];
      smallest = std::min(smallest, std::fabs(z));
      next[o] = std::max(0.0, z);
    }
    off += static_cast<std::size_t>(in) * out + out;
    act = std::move(next);
  }
  return smallest;
}

// Central differences of (target - q[action])^2.
inline std::vector<double> loss_gradient_fd(const std::vector<int>& sizes,
                                            std::vector<double> w,
                                            const std::vector<double>& x, std::size_t action,
                                            double target, double h = 1e-5) {
  auto loss = [&](const std::vector<double>& p) {
    const double e = target - mlp_forward(sizes, p, x)[action];
    return e * e;
  };
  std::vector<double> g(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double keep = w[k];
    w[k] = keep + h;
    const double up = loss(w);
    w[k] = keep - h;
    const double down = loss(w);
    w[k] = keep;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

// Shannon rate of `prbs` blocks of 180 kHz at `snr_db`.
inline double shannon_bits(int prbs, double snr_db) {
  return prbs * 180000.0 * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

}  // namespace oracle

#endif  // FEDSLICE_TESTS_ORACLES_H_
