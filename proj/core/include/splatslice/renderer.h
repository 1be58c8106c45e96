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
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "splatslice/compiler.h"
#include "splatslice/types.h"

namespace splatslice {

enum class RenderMode { kUnsliced, kHard, kModulated };

std::string_view to_string(RenderMode mode);
// Accepts "unsliced", "hard" and "modulated", case-insensitively.
std::optional<RenderMode> parse_render_mode(std::string_view text);

// Row-major RGBA8, sRGB-encoded.
struct FrameImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  FrameImage() = default;
  FrameImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * std::size_t(h) * 4, 0) {}

  std::uint8_t* at(int x, int y) { return &pixels[(std::size_t(y) * width + x) * 4]; }
  const std::uint8_t* at(int x, int y) const { return &pixels[(std::size_t(y) * width + x) * 4]; }
  bool operator==(const FrameImage&) const = default;
};

// Row-major linear RGB, the compositor's working buffer.
struct LinearImage {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;

  Vec3d at(int x, int y) const {
    const std::size_t i = (std::size_t(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

struct ProjectedSplat {
  Vec2d mean = Vec2d::Zero();  // pixels; pixel (i, j) has its center at (i + .5, j + .5)
  Mat2d cov = Mat2d::Identity();  // pixels^2, dilation included
  double depth = 0.0;
  double opacity = 0.0;
  Vec3d color = Vec3d::Zero();
};

inline constexpr double kScreenDilation = 0.3;
inline constexpr double kMaxSplatAlpha = 0.99;
inline constexpr double kTransmittanceCutoff = 1e-3;
inline constexpr double kMinOpacity = 1.0 / 255.0;

// Precomputed state whose baked plane best matches `plane`: the state nearest
// to where the plane passes the bounds centroid, measured along the asset
// axis. Planes missing the bounds select the last state.
std::size_t select_state(const LayeredAsset& asset, const SlicingPlane& plane);

// Base layer followed by delta layer k; views into the asset.
class ActiveSet {
 public:
  ActiveSet(std::span<const GaussianPrimitive> base, std::span<const GaussianPrimitive> delta)
      : base_(base), delta_(delta) {}

  std::size_t size() const { return base_.size() + delta_.size(); }
  const GaussianPrimitive& operator[](std::size_t i) const {
    return i < base_.size() ? base_[i] : delta_[i - base_.size()];
  }

 private:
  std::span<const GaussianPrimitive> base_;
  std::span<const GaussianPrimitive> delta_;
};

ActiveSet active_set(const LayeredAsset& asset, std::size_t k);

// Perspective EWA projection. Returns nullopt when the splat is at or behind
// the near plane, or when its 3-sigma screen ellipse misses the viewport.
// The opacity field is the primitive's own; callers substitute the sliced one.
std::optional<ProjectedSplat> project_gaussian(const GaussianPrimitive& prim,
                                               const CameraPose& camera,
                                               const ShCoefficients* sh = nullptr);

// Front-to-back "over" compositing of depth-sorted splats onto `background`.
// Throws ContractViolation when depths decrease.
LinearImage composite_linear(std::span<const ProjectedSplat> splats, int width, int height,
                             const Vec3d& background = Vec3d::Zero());
FrameImage composite(std::span<const ProjectedSplat> splats, int width, int height,
                     const Vec3d& background = Vec3d::Zero());

std::uint8_t linear_to_srgb8(double v);
FrameImage encode_srgb(const LinearImage& image);

struct RenderOptions {
  double k_sigma = kDefaultKSigma;
  Vec3d background = Vec3d::Zero();
};

struct RenderStats {
  std::size_t state_index = 0;
  std::size_t active = 0;     // primitives in the active set
  std::size_t projected = 0;  // splats that reached the compositor
};

// select_state -> active_set -> per-primitive slicing -> opacity floor ->
// projection -> depth sort. The result is ready for composite().
std::vector<ProjectedSplat> prepare_splats(const LayeredAsset& asset, const SlicingPlane& plane,
                                           const CameraPose& camera, RenderMode mode,
                                           const RenderOptions& options = {},
                                           RenderStats* stats = nullptr);

LinearImage render_linear(const LayeredAsset& asset, const SlicingPlane& plane,
                          const CameraPose& camera, RenderMode mode,
                          const RenderOptions& options = {}, RenderStats* stats = nullptr);

// Deterministic: identical inputs give identical bytes.
FrameImage render(const LayeredAsset& asset, const SlicingPlane& plane, const CameraPose& camera,
                  RenderMode mode, const RenderOptions& options = {},
                  RenderStats* stats = nullptr);

}  // namespace splatslice
