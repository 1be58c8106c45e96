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


// Independent reference implementations. None of these call into the
// renderer beyond shared value types and evaluate_color.

#pragma once

#include <span>
#include <vector>

#include "splatslice/renderer.h"

namespace splatslice::testing {

// Per-pixel front-to-back evaluation written for clarity: every splat is
// evaluated at every pixel, with no footprint bounds.
LinearImage brute_force_composite(std::span<const ProjectedSplat> splats, int width, int height,
                                  const Vec3d& background);

// Plane-clipped rendering by integration along each pixel ray. Every
// primitive contributes alpha times the part of its line integral that falls
// in {x . n > c}, normalized by the full line integral through its centre
// along that ray; primitives are composited by centre depth. With no cut this
// is the exact perspective footprint, so it differs from the splat renderer
// only by the screen-space linearization and by the cut itself.
LinearImage ray_integrated_reference(std::span<const GaussianPrimitive> prims,
                                     const SlicingPlane& plane, const CameraPose& camera,
                                     const Vec3d& background, int samples = 256);

struct ProjectionFit {
  Vec2d mean;
  Mat2d cov;  // includes the screen dilation
};

// Screen mean as the least-squares intersection of the projected principal
// axes (their 3-sigma endpoints), and screen covariance from a
// central-difference Jacobian of the pinhole map.
ProjectionFit fit_projection(const GaussianPrimitive& prim, const CameraPose& camera);

}  // namespace splatslice::testing
