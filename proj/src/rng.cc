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

#include "fedslice/rng.h"

#include <string>

namespace fedslice {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

Rng make_stream(std::uint64_t master_seed, std::string_view name) {
  const std::uint64_t h = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

Rng make_stream(std::uint64_t master_seed, std::string_view prefix, int a) {
  return make_stream(master_seed,
                     std::string(prefix) + "-" + std::to_string(a));
}

Rng make_stream(std::uint64_t master_seed, std::string_view prefix, int a,
                int b) {
  return make_stream(master_seed, std::string(prefix) + "-" +
                                      std::to_string(a) + "-" +
                                      std::to_string(b));
}

}  // namespace fedslice
