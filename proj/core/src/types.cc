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

#include "splatslice/types.h"

#include <cmath>
#include <numbers>

#include "splatslice/errors.h"

namespace splatslice {

SlicingPlane::SlicingPlane(const Vec3d& normal, double offset)
    : offset_(offset) {
  const double len = normal.norm();
  if (!std::isfinite(len) || len == 0.0) {
    throw InvalidArgument("plane normal must be non-zero and finite");
  }
  if (!std::isfinite(offset)) {
    throw InvalidArgument("plane offset must be finite");
  }
  normal_ = normal / len;
}

void CameraPose::validate() const {
  if (width < 1 || height < 1) {
    throw InvalidArgument("viewport must have positive width and height");
  }
  if (!(vertical_fov > 0.0 && vertical_fov < std::numbers::pi)) {
    throw InvalidArgument("vertical_fov must lie in (0, pi)");
  }
  if (!(near > 0.0) || !std::isfinite(near)) {
    throw InvalidArgument("near plane must be positive");
  }
  if (!position.allFinite()) {
    throw InvalidArgument("camera position must be finite");
  }
  const double qn = orientation.norm();
  if (!std::isfinite(qn) || std::abs(qn - 1.0) > 1e-6) {
    throw InvalidArgument("camera orientation must be a unit quaternion");
  }
}

double CameraPose::focal_length() const {
  return 0.5 * height / std::tan(0.5 * vertical_fov);
}

CameraPose CameraPose::look_at(const Vec3d& eye, const Vec3d& target,
                               double vertical_fov, int width, int height,
                               const Vec3d& up) {
  const Vec3d forward = (target - eye).normalized();
  Vec3d right = forward.cross(up);
  if (right.norm() < 1e-9) right = forward.cross(Vec3d::UnitY());
  if (right.norm() < 1e-9) right = forward.cross(Vec3d::UnitX());
  right.normalize();
  const Vec3d down = forward.cross(right);

  Mat3d rot;
  rot.col(0) = right;
  rot.col(1) = down;
  rot.col(2) = forward;

  CameraPose pose;
  pose.position = eye;
  pose.orientation = Eigen::Quaterniond(rot).normalized();
  pose.vertical_fov = vertical_fov;
  pose.width = width;
  pose.height = height;
  return pose;
}

}  // namespace splatslice
