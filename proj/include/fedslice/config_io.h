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

#ifndef FEDSLICE_CONFIG_IO_H_
#define FEDSLICE_CONFIG_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "fedslice/domain.h"

namespace fedslice {

// Parses a YAML scenario document (schema in docs/scenario.md). Missing
// keys keep their defaults; unknown keys and malformed values raise
// ConfigError with the offending path. The result is NOT validated.
ScenarioConfig parse_config(std::string_view yaml_text);

// Reads and parses a scenario file. Throws std::runtime_error if the file
// cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

// Emits a complete YAML document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace fedslice

#endif  // FEDSLICE_CONFIG_IO_H_
