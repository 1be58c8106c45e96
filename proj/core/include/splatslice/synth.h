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

// Synthetic stand-ins for baked per-state clouds. A fixed fraction of the
// primitives is shared verbatim by every state; the rest of each state is
// fresh and concentrated around that state's precompute plane.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "splatslice/ply.h"
#include "splatslice/sequence.h"

namespace splatslice {

struct SynthParams {
  std::size_t states = 200;
  std::size_t primitives = 10000;
  double shared_fraction = 0.95;
  std::uint64_t seed = 1;
  int sh_degree = 3;        // 0 disables higher-order SH
  bool unique_sh = false;   // fresh SH payloads for every non-shared primitive of every state
  Vec3d axis = Vec3d::UnitZ();
  double extent = 1.0;      // half-width of the cubic volume

  // Throws InvalidArgument for K = 0, f outside [0, 1], degree outside 0..3,
  // non-positive extent or a zero axis.
  void validate() const;
  std::size_t shared_count() const;
};

class SyntheticGenerator {
 public:
  explicit SyntheticGenerator(const SynthParams& params);

  const SynthParams& params() const { return params_; }
  // Offsets at the centers of K equal slabs spanning the volume.
  const std::vector<double>& offsets() const { return offsets_; }
  // Deterministic in (params, k); states may be generated in any order.
  GaussianCloud state(std::size_t k) const;

 private:
  SynthParams params_;
  Vec3d axis_, u_, v_;
  std::vector<double> offsets_;
  std::vector<GaussianPrimitive> shared_;
  std::vector<ShCoefficients> slot_sh_;  // per slot, used unless unique_sh
};

StateSequence generate_synthetic(const SynthParams& params);

struct SynthOutput {
  std::filesystem::path manifest;
  std::uint64_t ply_bytes = 0;
};

// Writes state_NNN.ply files and manifest.json into `dir` (created if
// needed), one state at a time.
SynthOutput write_synthetic(const SynthParams& params, const std::filesystem::path& dir);

}  // namespace splatslice
