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

#include "splatslice/slicing.h"

#include <algorithm>
#include <cmath>

#include "splatslice/errors.h"

namespace splatslice {

Mat3d covariance(const GaussianPrimitive& prim) {
  const Mat3d rot = prim.rotation.cast<double>().normalized().toRotationMatrix();
  const Vec3d s = prim.scale.cast<double>();
  const Mat3d sigma = rot * s.cwiseProduct(s).asDiagonal() * rot.transpose();
  // Symmetrize away rounding noise.
  return 0.5 * (sigma + sigma.transpose());
}

double projected_radius(const GaussianPrimitive& prim, const Vec3d& n,
                        double k_sigma) {
  // n^T R S^2 R^T n = |S R^T n|^2, which stays non-negative under rounding.
  const Mat3d rot = prim.rotation.cast<double>().normalized().toRotationMatrix();
  const Vec3d local = rot.transpose() * n;
  return k_sigma * local.cwiseProduct(prim.scale.cast<double>()).norm();
}

double signed_distance(const Vec3d& mu, const SlicingPlane& plane) {
  return mu.dot(plane.normal()) - plane.offset();
}

double modulated_opacity(double alpha, const Vec3d& mu,
                         const SlicingPlane& plane, double s_n) {
  if (!(s_n > 0.0)) {
    throw InvalidArgument("projected radius must be positive");
  }
  const double sigma =
      std::clamp(0.5 + signed_distance(mu, plane) / (2.0 * s_n), 0.0, 1.0);
  return alpha * sigma;
}

bool hard_visibility(const Vec3d& mu, const SlicingPlane& plane) {
  return signed_distance(mu, plane) > 0.0;
}

Vec3d evaluate_color(const GaussianPrimitive& prim, const ShCoefficients* sh,
                     const Vec3d& view_dir) {
  using namespace sh_basis;
  Vec3d rgb = kC0 * prim.dc_color.cast<double>();

  if (sh != nullptr && sh->degree >= 1) {
    const auto c = [&](std::size_t i) -> Vec3d {
      return sh->coeffs[i].cast<double>();
    };
    const double x = view_dir.x();
    const double y = view_dir.y();
    const double z = view_dir.z();
    rgb += -kC1 * y * c(0) + kC1 * z * c(1) - kC1 * x * c(2);

    if (sh->degree >= 2) {
      const double xx = x * x, yy = y * y, zz = z * z;
      const double xy = x * y, yz = y * z, xz = x * z;
      rgb += kC2[0] * xy * c(3) + kC2[1] * yz * c(4) +
             kC2[2] * (2.0 * zz - xx - yy) * c(5) + kC2[3] * xz * c(6) +
             kC2[4] * (xx - yy) * c(7);

      if (sh->degree >= 3) {
        rgb += kC3[0] * y * (3.0 * xx - yy) * c(8) +
               kC3[1] * xy * z * c(9) +
               kC3[2] * y * (4.0 * zz - xx - yy) * c(10) +
               kC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy) * c(11) +
               kC3[4] * x * (4.0 * zz - xx - yy) * c(12) +
               kC3[5] * z * (xx - yy) * c(13) +
               kC3[6] * x * (xx - 3.0 * yy) * c(14);
      }
    }
  }

  rgb.array() += 0.5;
  return rgb.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace splatslice
