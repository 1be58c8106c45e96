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

// Reading and writing per-state Gaussian point clouds in the PLY layout used
// by 3DGS exporters (x y z, scale_*, rot_*, opacity, f_dc_*, f_rest_*).

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "splatslice/types.h"

namespace splatslice {

// One baked state before consolidation. `sh_table` is local to this cloud.
struct GaussianCloud {
  std::vector<GaussianPrimitive> primitives;
  std::vector<ShCoefficients> sh_table;
  std::string source_name;

  const ShCoefficients* sh_for(const GaussianPrimitive& p) const {
    return p.has_sh() && p.sh_index < sh_table.size() ? &sh_table[p.sh_index]
                                                      : nullptr;
  }
};

enum class PlyFormat { kBinaryLittleEndian, kAscii };

// Parses a binary-little-endian or ASCII PLY. Scales are exponentiated,
// opacities pass through the logistic function and quaternions are
// normalized. Each vertex carrying f_rest_* gets its own sh_table entry.
//
// Throws ParseError (header problems, with line number), SchemaError
// (missing property) or DataError (non-finite values, with vertex index).
GaussianCloud parse_ply(std::string_view bytes, std::string source_name = {});

// Inverse of parse_ply. Primitives without SH are written with zero f_rest
// when any other primitive in the cloud has SH; lower-degree payloads are
// zero-padded to the highest degree present.
std::string write_ply(const GaussianCloud& cloud,
                      PlyFormat format = PlyFormat::kBinaryLittleEndian);

struct Violation {
  // Primitive index, or sh_table index when field starts with "sh_table".
  std::size_t index;
  std::string field;
  std::string message;
};

// Lists every broken type invariant. An empty result means the cloud is
// well-formed.
std::vector<Violation> validate_cloud(const GaussianCloud& cloud);

}  // namespace splatslice
