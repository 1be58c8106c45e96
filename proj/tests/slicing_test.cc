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
#include <random>

#include <Eigen/Eigenvalues>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "splatslice/errors.h"

namespace splatslice {
namespace {

const SlicingPlane kPlaneZ0(Vec3d::UnitZ(), 0.0);

TEST(ModulatedOpacity, HalfOnThePlane) {
  EXPECT_EQ(modulated_opacity(0.8, Vec3d(0.3, -0.2, 0.0), kPlaneZ0, 0.25), 0.4);
}

TEST(ModulatedOpacity, FullOneRadiusInside) {
  EXPECT_EQ(modulated_opacity(0.8, Vec3d(0.0, 0.0, 0.25), kPlaneZ0, 0.25), 0.8);
}

TEST(ModulatedOpacity, ZeroOneRadiusOutside) {
  EXPECT_EQ(modulated_opacity(0.8, Vec3d(0.0, 0.0, -0.25), kPlaneZ0, 0.25), 0.0);
}

TEST(ModulatedOpacity, ClampsBeyondTheBand) {
  EXPECT_EQ(modulated_opacity(0.5, Vec3d(0, 0, 7.0), kPlaneZ0, 0.1), 0.5);
  EXPECT_EQ(modulated_opacity(0.5, Vec3d(0, 0, -7.0), kPlaneZ0, 0.1), 0.0);
}

TEST(ModulatedOpacity, RejectsNonPositiveRadius) {
  EXPECT_THROW(modulated_opacity(0.5, Vec3d::Zero(), kPlaneZ0, 0.0), InvalidArgument);
  EXPECT_THROW(modulated_opacity(0.5, Vec3d::Zero(), kPlaneZ0, -1.0), InvalidArgument);
}

TEST(ModulatedOpacity, MonotoneInSignedDistance) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.01, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const SlicingPlane plane(Vec3d(u(rng), u(rng), u(rng)) + Vec3d(0, 0, 1e-3), u(rng));
    const double alpha = pos(rng);
    const double s_n = pos(rng);
    const Vec3d a(u(rng), u(rng), u(rng));
    const Vec3d b(u(rng), u(rng), u(rng));
    const double da = signed_distance(a, plane);
    const double db = signed_distance(b, plane);
    const double oa = modulated_opacity(alpha, a, plane, s_n);
    const double ob = modulated_opacity(alpha, b, plane, s_n);
    ASSERT_GE(oa, 0.0);
    ASSERT_LE(oa, alpha);
    if (da <= db) {
      ASSERT_LE(oa, ob);
    } else {
      ASSERT_GE(oa, ob);
    }
  }
}

TEST(ModulatedOpacity, NeverResurrectsDeeplyClippedSplats) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const GaussianPrimitive g = testing::random_gaussian(rng);
    const double s_n = projected_radius(g, kPlaneZ0.normal());
    const Vec3d mu = g.position.cast<double>();
    if (!hard_visibility(mu, kPlaneZ0) && signed_distance(mu, kPlaneZ0) <= -s_n) {
      EXPECT_EQ(modulated_opacity(g.opacity, mu, kPlaneZ0, s_n), 0.0);
    }
  }
}

TEST(Covariance, AxisAlignedCases) {
  GaussianPrimitive g;
  EXPECT_TRUE(covariance(g).isApprox(Mat3d::Identity(), 1e-15));
  g.scale = Vec3f(2, 1, 1);
  EXPECT_TRUE(covariance(g).isApprox(Vec3d(4, 1, 1).asDiagonal().toDenseMatrix(), 1e-15));
}

TEST(Covariance, QuarterTurnAboutZ) {
  GaussianPrimitive g;
  g.scale = Vec3f(2, 1, 1);
  g.rotation = Eigen::Quaternionf(Eigen::AngleAxisf(float(M_PI / 2), Vec3f::UnitZ()));
  const Mat3d expected = Vec3d(1, 4, 1).asDiagonal();
  EXPECT_LT((covariance(g) - expected).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Covariance, SymmetricWithScaleEigenvalues) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const GaussianPrimitive g = testing::random_gaussian(rng);
    const Mat3d c = covariance(g);
    EXPECT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    Vec3d eig = Eigen::SelfAdjointEigenSolver<Mat3d>(c).eigenvalues();
    Vec3d s2 = g.scale.cast<double>().cwiseAbs2();
    std::sort(eig.data(), eig.data() + 3);
    std::sort(s2.data(), s2.data() + 3);
    EXPECT_LT((eig - s2).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ProjectedRadius, IsotropicGaussian) {
  GaussianPrimitive g;
  g.scale = Vec3f::Constant(0.5f);
  EXPECT_NEAR(projected_radius(g, Vec3d(1, 2, 3).normalized()), 1.5, 1e-12);
  EXPECT_NEAR(projected_radius(g, Vec3d::UnitX(), 1.0), 0.5, 1e-12);
}

TEST(ProjectedRadius, MatchesQuadraticForm) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int i = 0; i < 200; ++i) {
    const GaussianPrimitive g = testing::random_gaussian(rng);
    const Vec3d dir = Vec3d(n(rng), n(rng), n(rng)).normalized();
    const double expected = 2.0 * std::sqrt(dir.dot(covariance(g) * dir));
    EXPECT_NEAR(projected_radius(g, dir, 2.0), expected, 1e-9);
  }
}

TEST(ProjectedRadius, RotationPicksTheAxis) {
  GaussianPrimitive g;
  g.scale = Vec3f(0.1f, 0.2f, 0.4f);
  // 90 degrees about y swaps the x and z extents.
  g.rotation = Eigen::Quaternionf(Eigen::AngleAxisf(float(M_PI / 2), Vec3f::UnitY()));
  EXPECT_NEAR(projected_radius(g, Vec3d::UnitX(), 1.0), 0.4, 1e-6);
  EXPECT_NEAR(projected_radius(g, Vec3d::UnitZ(), 1.0), 0.1, 1e-6);
}

TEST(ProjectedRadius, QuarterTurnAboutZPicksSecondScale) {
  GaussianPrimitive g;
  g.scale = Vec3f(0.1f, 0.2f, 0.4f);
  g.rotation = Eigen::Quaternionf(Eigen::AngleAxisf(float(M_PI / 2), Vec3f::UnitZ()));
  EXPECT_NEAR(projected_radius(g, Vec3d::UnitX(), 1.0), 0.2, 1e-7);
}

TEST(ProjectedRadius, QuaternionSignInvariant) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    GaussianPrimitive g = testing::random_gaussian(rng);
    GaussianPrimitive h = g;
    h.rotation.coeffs() = -g.rotation.coeffs();
    const Vec3d n = g.position.cast<double>().normalized();
    EXPECT_EQ(projected_radius(g, n), projected_radius(h, n));
  }
}

TEST(ModulatedOpacity, LipschitzInOffset) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3d n = Vec3d(u(rng), u(rng), 2.0).normalized();
    const double c = u(rng);
    const double delta = 1e-3 * u(rng);
    const double s_n = 0.05 + std::abs(u(rng));
    const Vec3d mu(u(rng), u(rng), u(rng));
    const double a = modulated_opacity(0.9, mu, SlicingPlane(n, c), s_n);
    const double b = modulated_opacity(0.9, mu, SlicingPlane(n, c + delta), s_n);
    EXPECT_LE(std::abs(a - b), 0.9 * std::abs(delta) / (2.0 * s_n) + 1e-12);
  }
}

TEST(HardVisibility, BoundaryIsInvisible) {
  EXPECT_FALSE(hard_visibility(Vec3d(1, 2, 0), kPlaneZ0));
  EXPECT_TRUE(hard_visibility(Vec3d(0, 0, 1e-12), kPlaneZ0));
  EXPECT_FALSE(hard_visibility(Vec3d(0, 0, -1e-12), kPlaneZ0));
}

TEST(HardVisibility, PlaneFlipCoverage) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3d n(u(rng), u(rng), u(rng) + 2.0);
    const double c = u(rng);
    const SlicingPlane plane(n, c);
    const SlicingPlane flipped(-n, -c);
    const Vec3d mu(u(rng), u(rng), u(rng));
    EXPECT_NE(hard_visibility(mu, plane), hard_visibility(mu, flipped));
  }
}

TEST(SignedDistance, Examples) {
  EXPECT_EQ(signed_distance(Vec3d(5, 5, 2), kPlaneZ0), 2.0);
  EXPECT_EQ(signed_distance(Vec3d(0, 0, 1), SlicingPlane(Vec3d::UnitZ(), 3.0)), -2.0);
  EXPECT_EQ(signed_distance(Vec3d(9, -4, 0), kPlaneZ0), 0.0);
}

TEST(SignedDistance, UsesTheNormalizedNormal) {
  const SlicingPlane plane(Vec3d(0, 0, 4), 1.0);
  EXPECT_DOUBLE_EQ(signed_distance(Vec3d(0, 0, 3), plane), 2.0);
}

TEST(EvaluateColor, DcOnly) {
  GaussianPrimitive g;
  g.dc_color = Vec3f(0.0f, 1.0f, -1.0f);
  const Vec3d c = evaluate_color(g, nullptr, Vec3d::UnitZ());
  EXPECT_NEAR(c.x(), 0.5, 1e-12);
  EXPECT_NEAR(c.y(), 0.5 + sh_basis::kC0, 1e-7);
  EXPECT_NEAR(c.z(), 0.5 - sh_basis::kC0, 1e-7);
}

TEST(EvaluateColor, ZeroDcIsMidGray) {
  EXPECT_EQ(evaluate_color(GaussianPrimitive{}, nullptr, Vec3d::UnitY()), Vec3d(0.5, 0.5, 0.5));
}

TEST(EvaluateColor, DcOnlyIsViewIndependent) {
  GaussianPrimitive g;
  g.dc_color = Vec3f(0.3f, -0.7f, 1.1f);
  const Vec3d ref = evaluate_color(g, nullptr, Vec3d::UnitZ());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(evaluate_color(g, nullptr, Vec3d(n(rng), n(rng), n(rng)).normalized()), ref);
  }
}

TEST(EvaluateColor, ClampsToUnitRange) {
  GaussianPrimitive g;
  g.dc_color = Vec3f(10.0f, -10.0f, 0.0f);
  const Vec3d c = evaluate_color(g, nullptr, Vec3d::UnitZ());
  EXPECT_EQ(c.x(), 1.0);
  EXPECT_EQ(c.y(), 0.0);
}

TEST(EvaluateColor, DegreeOneFollowsViewDirection) {
  GaussianPrimitive g;
  ShCoefficients sh;
  sh.degree = 1;
  sh.coeffs = {Vec3f::Zero(), Vec3f(0.2f, 0.2f, 0.2f), Vec3f::Zero()};
  // The second band-1 coefficient pairs with +z.
  const Vec3d up = evaluate_color(g, &sh, Vec3d::UnitZ());
  const Vec3d down = evaluate_color(g, &sh, -Vec3d::UnitZ());
  const Vec3d side = evaluate_color(g, &sh, Vec3d::UnitX());
  EXPECT_NEAR(up.x(), 0.5 + sh_basis::kC1 * 0.2, 1e-7);
  EXPECT_NEAR(down.x(), 0.5 - sh_basis::kC1 * 0.2, 1e-7);
  EXPECT_NEAR(side.x(), 0.5, 1e-12);
}

TEST(EvaluateColor, HigherBandsVanishOnAxisForOddTerms) {
  GaussianPrimitive g;
  ShCoefficients sh;
  sh.degree = 3;
  sh.coeffs.assign(15, Vec3f::Zero());
  sh.coeffs[5] = Vec3f::Constant(0.1f);   // 2z^2 - x^2 - y^2
  sh.coeffs[11] = Vec3f::Constant(0.1f);  // z (2z^2 - 3x^2 - 3y^2)
  const Vec3d c = evaluate_color(g, &sh, Vec3d::UnitZ());
  const double expected = 0.5 + 0.1 * (2.0 * sh_basis::kC2[2] + 2.0 * sh_basis::kC3[3]);
  EXPECT_NEAR(c.x(), expected, 1e-6);
}

}  // namespace
}  // namespace splatslice
