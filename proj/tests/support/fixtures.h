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


// Deterministic fixtures shared by the unit tests, the acceptance suite and
// the Python oracle scripts under tests/oracles.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "splatslice/compiler.h"
#include "splatslice/renderer.h"

namespace splatslice::testing {

// 64-bit LCG mirrored by tests/oracles/metric_reference.py.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint8_t byte() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::uint8_t>(state_ >> 56);
  }

 private:
  std::uint64_t state_;
};

FrameImage noise_image(int w, int h, std::uint64_t seed);
FrameImage perturbed(const FrameImage& img, std::uint64_t seed, int amplitude);
FrameImage smooth_image(int w, int h, std::uint64_t seed);
FrameImage solid_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Primitive with the given centre, isotropic scale, opacity and linear RGB.
GaussianPrimitive make_gaussian(const Vec3d& position, double scale, double opacity,
                                const Vec3d& rgb);

// Random primitive inside [-extent, extent]^3 with a random rotation.
GaussianPrimitive random_gaussian(std::mt19937_64& rng, double extent = 1.0);

// Single-state asset holding `prims`, baked at `offset` along `axis`.
LayeredAsset single_state_asset(const std::vector<GaussianPrimitive>& prims,
                                const Vec3d& axis = Vec3d::UnitZ(), double offset = 0.0);

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace splatslice::testing
