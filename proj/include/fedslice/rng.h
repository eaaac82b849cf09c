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

#ifndef FEDSLICE_RNG_H_
#define FEDSLICE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace fedslice {

using Rng = std::mt19937_64;

// Derives an independent generator for a named component from the master
// seed. The same (seed, name) pair always yields the same stream.
Rng make_stream(std::uint64_t master_seed, std::string_view name);

// Convenience for indexed streams such as "agent-<slice>-<bs>".
Rng make_stream(std::uint64_t master_seed, std::string_view prefix, int a);
Rng make_stream(std::uint64_t master_seed, std::string_view prefix, int a,
                int b);

}  // namespace fedslice

#endif  // FEDSLICE_RNG_H_
