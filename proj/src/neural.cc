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

#include "fedslice/neural.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace fedslice {
namespace {

void check_input(const ModelParams& params, std::span<const double> input) {
  if (params.layer_sizes.size() < 2)
    throw DimensionError("network needs at least an input and an output layer");
  if (input.size() != params.input_dim())
    throw DimensionError("input has " + std::to_string(input.size()) +
                         " entries, network expects " +
                         std::to_string(params.input_dim()));
  if (params.values.size() != param_count(params.layer_sizes))
    throw DimensionError("parameter vector length does not match layer sizes");
}

// Per-layer activations; acts[0] is the input, acts.back() the output.
// Hidden activations are stored post-ReLU.
std::vector<std::vector<double>> forward_all(const ModelParams& params,
                                             std::span<const double> input) {
  const auto& sizes = params.layer_sizes;
  std::vector<std::vector<double>> acts(sizes.size());
  acts[0].assign(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    const double* w = params.values.data() + offset;
    const double* b = w + in * out;
    auto& next = acts[l + 1];
    next.resize(out);
    const bool hidden = l + 2 < sizes.size();
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) z += row[i] * acts[l][i];
      next[o] = hidden ? std::max(0.0, z) : z;
    }
    offset += in * out + out;
  }
  return acts;
}

}  // namespace

std::size_t param_count(std::span<const int> layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    n += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l + 1] + layer_sizes[l + 1];
  }
  return n;
}

ModelParams init_params(std::vector<int> layer_sizes, Rng& rng) {
  ModelParams p;
  p.values.assign(param_count(layer_sizes), 0.0);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t in = layer_sizes[l];
    const std::size_t out = layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t k = 0; k < in * out; ++k) p.values[offset + k] = dist(rng);
    offset += in * out + out;  // biases stay zero
  }
  p.layer_sizes = std::move(layer_sizes);
  return p;
}

std::vector<double> forward(const ModelParams& params, std::span<const double> input) {
  check_input(params, input);
  return std::move(forward_all(params, input).back());
}

double accumulate_gradient(const ModelParams& params, std::span<const double> input,
                           std::size_t action, double td_target, double scale,
                           std::span<double> grad) {
  check_input(params, input);
  if (action >= params.output_dim())
    throw DimensionError("action index out of range");
  if (grad.size() != params.values.size())
    throw DimensionError("gradient buffer length does not match parameters");

  const auto& sizes = params.layer_sizes;
  const auto acts = forward_all(params, input);
  const double q = acts.back()[action];

  // delta = dLoss/dz for the current layer's pre-activations.
  std::vector<double> delta(sizes.back(), 0.0);
  delta[action] = -2.0 * (td_target - q) * scale;

  std::vector<std::size_t> offsets(sizes.size() - 1);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    offsets[l] = offset;
    offset += static_cast<std::size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }

  for (std::size_t l = sizes.size() - 1; l-- > 0;) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    const double* w = params.values.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + in * out;
    const auto& a_in = acts[l];
    for (std::size_t o = 0; o < out; ++o) {
      if (delta[o] == 0.0) continue;
      gb[o] += delta[o];
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += delta[o] * a_in[i];
    }
    if (l == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      if (delta[o] == 0.0) continue;
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * delta[o];
    }
    // ReLU derivative; a_in is post-activation so a_in > 0 iff z > 0.
    for (std::size_t i = 0; i < in; ++i) {
      if (a_in[i] <= 0.0) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
  return q;
}

std::vector<double> backward(const ModelParams& params, std::span<const double> input,
                             std::size_t action, double td_target) {
  std::vector<double> grad(params.values.size(), 0.0);
  accumulate_gradient(params, input, action, td_target, 1.0, grad);
  return grad;
}

void adam_update(ModelParams& params, std::span<const double> grads, OptState& opt,
                 double lr) {
  const std::size_t n = params.values.size();
  if (grads.size() != n || opt.first_moment.size() != n || opt.second_moment.size() != n)
    throw DimensionError("adam_update: length mismatch");
  ++opt.step_count;
  const double t = static_cast<double>(opt.step_count);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = grads[k];
    opt.first_moment[k] = kAdamBeta1 * opt.first_moment[k] + (1.0 - kAdamBeta1) * g;
    opt.second_moment[k] = kAdamBeta2 * opt.second_moment[k] + (1.0 - kAdamBeta2) * g * g;
    const double m_hat = opt.first_moment[k] / correction1;
    const double v_hat = opt.second_moment[k] / correction2;
    params.values[k] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
  }
}

void sgd_update(ModelParams& params, std::span<const double> grads, double lr) {
  if (grads.size() != params.values.size()) throw DimensionError("sgd_update: length mismatch");
  for (std::size_t k = 0; k < grads.size(); ++k) params.values[k] -= lr * grads[k];
}

void write_u32(std::ostream& out, std::uint32_t value) {
  const char bytes[4] = {static_cast<char>(value & 0xff), static_cast<char>((value >> 8) & 0xff),
                         static_cast<char>((value >> 16) & 0xff),
                         static_cast<char>((value >> 24) & 0xff)};
  out.write(bytes, 4);
}

void write_f32(std::ostream& out, float value) {
  write_u32(out, std::bit_cast<std::uint32_t>(value));
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw std::runtime_error("checkpoint truncated");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

float read_f32(std::istream& in) { return std::bit_cast<float>(read_u32(in)); }

std::size_t model_bytes(const ModelParams& params) {
  return checkpoint_header_bytes(params.layer_sizes.size()) + 4 * params.values.size();
}

void save_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_u32(out, static_cast<std::uint32_t>(params.layer_sizes.size()));
  for (int size : params.layer_sizes) write_u32(out, static_cast<std::uint32_t>(size));
  for (double v : params.values) write_f32(out, static_cast<float>(v));
  if (!out) throw std::runtime_error("failed to write checkpoint");
}

ModelParams load_checkpoint(std::istream& in) {
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a model checkpoint (bad magic)");
  const std::uint32_t n_layers = read_u32(in);
  if (n_layers < 2 || n_layers > 64) throw std::runtime_error("implausible layer count");
  ModelParams p;
  for (std::uint32_t l = 0; l < n_layers; ++l)
    p.layer_sizes.push_back(static_cast<int>(read_u32(in)));
  p.values.resize(param_count(p.layer_sizes));
  for (auto& v : p.values) v = read_f32(in);
  return p;
}

}  // namespace fedslice
