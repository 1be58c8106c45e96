// Copyright 2026 The splatslice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "splatslice/ply.h"
#include "splatslice/types.h"

namespace splatslice {

// K baked states, each tagged with the offset of its precompute plane along
// a shared axis. Offsets are strictly increasing.
struct StateSequence {
  std::vector<GaussianCloud> states;
  std::vector<double> offsets;
  Vec3d axis = Vec3d::UnitZ();

  std::size_t size() const { return states.size(); }
};

// Sorts states by offset, normalizes the axis and checks the invariants.
// Throws ManifestError on duplicate offsets, a zero axis or K = 0.
StateSequence make_state_sequence(std::vector<GaussianCloud> states,
                                  std::vector<double> offsets, Vec3d axis);

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest directory
  double offset = 0.0;
};

// { "axis": [x,y,z], "states": [ { "path": "...", "offset": c }, ... ] }
struct Manifest {
  Vec3d axis = Vec3d::UnitZ();
  std::vector<ManifestEntry> states;  // sorted by offset
};

// Parses manifest JSON. Relative paths resolve against `base_dir`.
Manifest parse_manifest(std::string_view json_text,
                        const std::filesystem::path& base_dir);
Manifest read_manifest(const std::filesystem::path& manifest_path);
std::string manifest_to_json(const Manifest& manifest,
                             const std::filesystem::path& relative_to);

// Loads every PLY named by the manifest, in offset order. States are parsed
// concurrently.
StateSequence load_state_sequence(const Manifest& manifest);
StateSequence load_state_sequence(const std::filesystem::path& manifest_path);

// Whole-file helpers; failures raise IoError naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace splatslice
