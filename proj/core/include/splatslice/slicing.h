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

// Closed-form slicing math shared by the compiler and the renderer. Every
// function here is pure.

#pragma once

#include "splatslice/types.h"

namespace splatslice {

// World-space covariance R * diag(scale^2) * R^T.
Mat3d covariance(const GaussianPrimitive& prim);

// Extent of the Gaussian along the unit direction `n`:
// k_sigma * sqrt(n^T * Sigma * n).
double projected_radius(const GaussianPrimitive& prim, const Vec3d& n,
                        double k_sigma = kDefaultKSigma);

// mu . n - c
double signed_distance(const Vec3d& mu, const SlicingPlane& plane);

// Opacity after the soft cut: alpha * clamp(1/2 + d / (2 s_n), 0, 1) where d
// is the signed distance of `mu`. Throws InvalidArgument unless s_n > 0.
double modulated_opacity(double alpha, const Vec3d& mu,
                         const SlicingPlane& plane, double s_n);

// Centroid test of the baseline cut. A centroid exactly on the plane is
// not visible.
bool hard_visibility(const Vec3d& mu, const SlicingPlane& plane);

// RGB seen along `view_dir` (unit, pointing from the camera to the splat).
// Evaluates the real SH basis up to the degree of `sh`, adds the 0.5 offset
// and clamps to [0, 1]. With `sh == nullptr` only the DC term contributes.
Vec3d evaluate_color(const GaussianPrimitive& prim, const ShCoefficients* sh,
                     const Vec3d& view_dir);

// Real SH basis constants in the ordering used by 3DGS exports.
namespace sh_basis {
inline constexpr double kC0 = 0.28209479177387814;
inline constexpr double kC1 = 0.4886025119029199;
inline constexpr double kC2[5] = {1.0925484305920792, -1.0925484305920792,
                                  0.31539156525252005, -1.0925484305920792,
                                  0.5462742152960396};
inline constexpr double kC3[7] = {-0.5900435899266435, 2.890611442640554,
                                  -0.4570457994644658, 0.3731763325901154,
                                  -0.4570457994644658, 1.445305721320277,
                                  -0.5900435899266435};
}  // namespace sh_basis

}  // namespace splatslice
