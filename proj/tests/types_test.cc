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
#include <limits>

#include <gtest/gtest.h>

#include "splatslice/errors.h"

namespace splatslice {
namespace {

TEST(SlicingPlane, NormalizesTheNormal) {
  const SlicingPlane plane(Vec3d(0, 3, 4), 2.0);
  EXPECT_NEAR(plane.normal().norm(), 1.0, 1e-15);
  EXPECT_NEAR(plane.normal().y(), 0.6, 1e-15);
  EXPECT_EQ(plane.offset(), 2.0);
}

TEST(SlicingPlane, RejectsDegenerateInput) {
  EXPECT_THROW(SlicingPlane(Vec3d::Zero(), 0.0), InvalidArgument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SlicingPlane(Vec3d(nan, 0, 1), 0.0), InvalidArgument);
  EXPECT_THROW(SlicingPlane(Vec3d::UnitZ(), std::numeric_limits<double>::infinity()),
               InvalidArgument);
}

TEST(CameraPose, ValidateRejectsBadFields) {
  CameraPose cam;
  EXPECT_NO_THROW(cam.validate());
  cam.width = 0;
  EXPECT_THROW(cam.validate(), InvalidArgument);
  cam = {};
  cam.vertical_fov = M_PI;
  EXPECT_THROW(cam.validate(), InvalidArgument);
  cam = {};
  cam.near = 0.0;
  EXPECT_THROW(cam.validate(), InvalidArgument);
  cam = {};
  cam.orientation = Eigen::Quaterniond(2, 0, 0, 0);
  EXPECT_THROW(cam.validate(), InvalidArgument);
}

TEST(CameraPose, FocalLength) {
  CameraPose cam;
  cam.height = 200;
  cam.vertical_fov = M_PI / 2;
  EXPECT_NEAR(cam.focal_length(), 100.0, 1e-12);
}

TEST(CameraPose, LookAtPointsForwardWithZUp) {
  const CameraPose cam = CameraPose::look_at(Vec3d(0, -5, 0), Vec3d::Zero(), 0.8, 64, 64);
  const Mat3d r = cam.orientation.toRotationMatrix();
  EXPECT_TRUE(r.col(2).isApprox(Vec3d::UnitY(), 1e-12));
  // Image "down" is world -z when z is up.
  EXPECT_TRUE(r.col(1).isApprox(-Vec3d::UnitZ(), 1e-12));
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(CameraPose, LookAtAlongUpFallsBack) {
  const CameraPose cam = CameraPose::look_at(Vec3d(0, 0, 5), Vec3d::Zero(), 0.8, 64, 64);
  const Mat3d r = cam.orientation.toRotationMatrix();
  EXPECT_TRUE(r.col(2).isApprox(-Vec3d::UnitZ(), 1e-12));
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(ShCoefficients, CountsAndShape) {
  EXPECT_EQ(ShCoefficients::coeff_count(1), 3u);
  EXPECT_EQ(ShCoefficients::coeff_count(3), 15u);
  ShCoefficients sh;
  sh.degree = 2;
  sh.coeffs.resize(8);
  EXPECT_TRUE(sh.well_formed());
  sh.coeffs.resize(7);
  EXPECT_FALSE(sh.well_formed());
}

}  // namespace
}  // namespace splatslice
