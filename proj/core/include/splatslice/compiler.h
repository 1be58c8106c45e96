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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "splatslice/ply.h"
#include "splatslice/sequence.h"
#include "splatslice/types.h"

namespace splatslice {

// Quantization grids of the identity key.
inline constexpr double kKeyPositionStep = 1e-5;
inline constexpr double kKeyScaleStep = 1e-5;
inline constexpr double kKeyOpacityStep = 1e-5;
inline constexpr double kKeyColorStep = 1e-5;
inline constexpr double kKeyRotationStep = 1e-6;

// Identity of a primitive across states: every attribute snapped to a fixed
// grid, the quaternion sign canonicalized to w >= 0, and the SH payload
// referenced through its index in the deduplicated global table (one index
// per distinct payload). Layout: position[3], scale[3], rotation wxyz[4],
// opacity, dc[3], sh index.
struct IdentityKey {
  std::array<std::int64_t, 15> q{};

  auto operator<=>(const IdentityKey&) const = default;
  bool operator==(const IdentityKey&) const = default;
  std::string to_string() const;
};

struct IdentityKeyHash {
  std::size_t operator()(const IdentityKey& k) const;
};

// Call only after SH deduplication, so that equal payloads share an index.
IdentityKey make_identity_key(const GaussianPrimitive& prim);

// Collects SH payloads quantized to half precision and hands out one id per
// distinct payload. finish() orders the table by payload bits so the result
// does not depend on insertion order.
class ShInterner {
 public:
  // Provisional id; stable until finish().
  std::uint32_t intern(const ShCoefficients& sh);

  struct Table {
    int degree = 0;
    std::vector<ShCoefficients> entries;
    std::vector<std::uint32_t> remap;  // provisional id -> final index
  };
  Table finish() const;

  std::size_t size() const { return keys_.size(); }

 private:
  std::unordered_map<std::u16string, std::uint32_t> ids_;
  std::vector<std::u16string> keys_;
  int max_degree_ = 0;
};

// A state sequence whose primitives reference one global SH table. The
// per-state tables are emptied.
struct DedupedSequence {
  StateSequence sequence;
  int sh_degree = 0;
  std::vector<ShCoefficients> sh_table;
};

DedupedSequence dedup_sh(StateSequence seq);

// The compiled asset: a global SH table, a base layer present in every state
// and one delta layer per state.
struct LayeredAsset {
  Vec3f axis = Vec3f::UnitZ();
  std::vector<float> offsets;
  int sh_degree = 0;
  std::vector<ShCoefficients> sh_table;
  std::vector<GaussianPrimitive> base_layer;
  std::vector<std::vector<GaussianPrimitive>> delta_layers;
  Aabb bounds;

  std::size_t state_count() const { return offsets.size(); }
  std::size_t delta_total() const;
  const ShCoefficients* sh_for(const GaussianPrimitive& p) const {
    return p.has_sh() && p.sh_index < sh_table.size() ? &sh_table[p.sh_index] : nullptr;
  }
};

// Splits the states into base (intersection under IdentityKey) and deltas.
// Layers are sorted by key. Throws CompileError when a state holds the same
// key twice or when two offsets collapse in single precision.
LayeredAsset consolidate(DedupedSequence deduped);

// Base layer followed by delta k, with the global SH table.
GaussianCloud reconstruct_state(const LayeredAsset& asset, std::size_t k);

LayeredAsset compile_sequence(StateSequence seq);

struct CompileStats {
  std::uint64_t input_bytes = 0;
  std::size_t states = 0;
  std::size_t base_count = 0;
  std::size_t delta_total = 0;
  std::size_t sh_count = 0;
};

struct CompileResult {
  LayeredAsset asset;
  CompileStats stats;
};

// Loads and compiles a manifest, interning SH payloads as each state is
// parsed so that per-state tables are never all resident at once.
CompileResult compile_manifest(const Manifest& manifest);

}  // namespace splatslice
