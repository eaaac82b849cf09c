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

#ifndef FEDSLICE_NEURAL_H_
#define FEDSLICE_NEURAL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedslice/rng.h"

namespace fedslice {

// Parameters of a fully connected ReLU network, flattened.
//
// Layout, for each layer l mapping in_l -> out_l in order: the weight
// matrix row-major as [out_l][in_l], followed by the out_l biases. Hidden
// layers apply ReLU; the output layer is linear.
struct ModelParams {
  std::vector<int> layer_sizes;  // input, hidden..., output
  std::vector<double> values;

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  bool same_shape(const ModelParams& other) const {
    return layer_sizes == other.layer_sizes && values.size() == other.values.size();
  }
  bool operator==(const ModelParams&) const = default;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::size_t param_count(std::span<const int> layer_sizes);

// He-uniform weights (limit sqrt(6 / fan_in)), zero biases.
ModelParams init_params(std::vector<int> layer_sizes, Rng& rng);

std::vector<double> forward(const ModelParams& params, std::span<const double> input);

// Gradient of (td_target - q[action])^2 with respect to every parameter.
std::vector<double> backward(const ModelParams& params, std::span<const double> input,
                             std::size_t action, double td_target);

// Adds `scale` times the gradient above into `grad` and returns q[action].
// Used by batched training to avoid per-sample allocations.
double accumulate_gradient(const ModelParams& params, std::span<const double> input,
                           std::size_t action, double td_target, double scale,
                           std::span<double> grad);

struct OptState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step_count = 0;

  static OptState zeros(std::size_t n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0};
  }
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

void adam_update(ModelParams& params, std::span<const double> grads, OptState& opt,
                 double lr);
void sgd_update(ModelParams& params, std::span<const double> grads, double lr);

// Binary checkpoint, little-endian:
//   8 bytes  magic "FDRLNN1\0"
//   uint32   number of layers L
//   L x uint32 layer sizes
//   param_count x float32 values in the layout above
inline constexpr char kCheckpointMagic[8] = {'F', 'D', 'R', 'L', 'N', 'N', '1', '\0'};

constexpr std::size_t checkpoint_header_bytes(std::size_t n_layers) {
  return sizeof(kCheckpointMagic) + 4 + 4 * n_layers;
}

// Bytes of one serialized model; the unit of federation traffic.
std::size_t model_bytes(const ModelParams& params);

void save_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams load_checkpoint(std::istream& in);

// Little-endian primitives shared with the agent checkpoint trailer.
void write_u32(std::ostream& out, std::uint32_t value);
void write_f32(std::ostream& out, float value);
std::uint32_t read_u32(std::istream& in);
float read_f32(std::istream& in);

}  // namespace fedslice

#endif  // FEDSLICE_NEURAL_H_
