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
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace splatslice {

using Vec2d = Eigen::Vector2d;
using Vec3f = Eigen::Vector3f;
using Vec3d = Eigen::Vector3d;
using Mat2d = Eigen::Matrix2d;
using Mat3d = Eigen::Matrix3d;

// Sentinel for "no higher-order SH coefficients".
inline constexpr std::uint32_t kNoSh = 0xFFFFFFFFu;

// Default sigma multiple for the projected radius along a plane normal.
inline constexpr double kDefaultKSigma = 3.0;

// One anisotropic 3D Gaussian. Stored in single precision, the precision of
// both the PLY input and the compiled asset.
struct GaussianPrimitive {
  Vec3f position = Vec3f::Zero();
  // Per-axis standard deviations, already exponentiated.
  Vec3f scale = Vec3f::Ones();
  Eigen::Quaternionf rotation = Eigen::Quaternionf::Identity();
  float opacity = 1.0f;
  // Degree-0 SH term; the +0.5 offset is applied at evaluation time.
  Vec3f dc_color = Vec3f::Zero();
  std::uint32_t sh_index = kNoSh;

  bool has_sh() const { return sh_index != kNoSh; }
};

// Oriented plane { p : p.n = c }. The half-space p.n > c is kept.
class SlicingPlane {
 public:
  // Normalizes `normal`; throws InvalidArgument if it is zero or not finite.
  SlicingPlane(const Vec3d& normal, double offset);

  const Vec3d& normal() const { return normal_; }
  double offset() const { return offset_; }

 private:
  Vec3d normal_;
  double offset_;
};

// Higher-order SH coefficients (orders 1..degree), one RGB triple per basis
// function.
struct ShCoefficients {
  int degree = 0;
  std::vector<Vec3f> coeffs;

  static constexpr std::size_t coeff_count(int degree) {
    return static_cast<std::size_t>((degree + 1) * (degree + 1) - 1);
  }
  bool well_formed() const {
    return degree >= 1 && degree <= 3 && coeffs.size() == coeff_count(degree);
  }
};

// Pinhole camera. Camera space is x right, y down, z forward; `orientation`
// rotates camera-space vectors into world space.
struct CameraPose {
  Vec3d position = Vec3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  double vertical_fov = 0.8;
  int width = 256;
  int height = 256;
  double near = 0.01;

  // Throws InvalidArgument when any field is out of range.
  void validate() const;

  double focal_length() const;

  // Orientation such that the camera at `eye` looks at `target`. `up` picks
  // the roll; it falls back to another axis when parallel to the view.
  static CameraPose look_at(const Vec3d& eye, const Vec3d& target,
                            double vertical_fov, int width, int height,
                            const Vec3d& up = Vec3d::UnitZ());
};

struct Aabb {
  Vec3f min = Vec3f::Zero();
  Vec3f max = Vec3f::Zero();

  Vec3d center() const { return 0.5 * (min + max).cast<double>(); }
  bool operator==(const Aabb&) const = default;
};

}  // namespace splatslice
