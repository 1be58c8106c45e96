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


#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "splatslice/slicing.h"

namespace splatslice::testing {

LinearImage brute_force_composite(std::span<const ProjectedSplat> splats, int width, int height,
                                  const Vec3d& background) {
  LinearImage out;
  out.width = width;
  out.height = height;
  out.rgb.assign(std::size_t(width) * height * 3, 0.0f);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec2d pixel(x + 0.5, y + 0.5);
      Vec3d color = Vec3d::Zero();
      double t = 1.0;
      for (const auto& s : splats) {
        if (t < 1e-3) break;
        const Vec2d d = pixel - s.mean;
        const double q = d.dot(s.cov.inverse() * d);
        double a = s.opacity * std::exp(-0.5 * q);
        a = std::min(std::max(a, 0.0), 0.99);
        color += s.color * a * t;
        t *= 1.0 - a;
      }
      color += t * background;
      for (int c = 0; c < 3; ++c) {
        out.rgb[(std::size_t(y) * width + x) * 3 + c] = static_cast<float>(color[c]);
      }
    }
  }
  return out;
}

namespace {

struct Blob {
  Vec3d mu;
  Mat3d precision;
  double alpha;
  double depth;  // camera-space z of the centre
  Vec3d color;
};

}  // namespace

// Each Gaussian keeps the fraction of its line integral along the pixel ray
// that lies in the kept half-space. Unclipped, the opacity reduces to
// alpha * exp(-m^2 / 2) with m the Mahalanobis distance from the centre to
// the ray, which is the exact footprint the splat projection approximates.
LinearImage ray_integrated_reference(std::span<const GaussianPrimitive> prims,
                                     const SlicingPlane& plane, const CameraPose& camera,
                                     const Vec3d& background, int samples) {
  const Mat3d rot = camera.orientation.normalized().toRotationMatrix();
  const Vec3d origin = camera.position;
  const double f = 0.5 * camera.height / std::tan(0.5 * camera.vertical_fov);

  std::vector<Blob> blobs;
  for (const auto& p : prims) {
    Blob b;
    b.mu = p.position.cast<double>();
    const Mat3d r = p.rotation.cast<double>().normalized().toRotationMatrix();
    const Vec3d s2 = p.scale.cast<double>().cwiseAbs2();
    b.precision = r * s2.cwiseInverse().asDiagonal() * r.transpose();
    b.alpha = p.opacity;
    b.depth = (b.mu - origin).dot(rot.col(2));
    b.color = evaluate_color(p, nullptr, (b.mu - origin).normalized());
    if (b.depth > camera.near) blobs.push_back(b);
  }
  std::stable_sort(blobs.begin(), blobs.end(),
                   [](const Blob& a, const Blob& b) { return a.depth < b.depth; });

  LinearImage out;
  out.width = camera.width;
  out.height = camera.height;
  out.rgb.assign(std::size_t(camera.width) * camera.height * 3, 0.0f);

  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      const Vec3d dir_cam((x + 0.5 - 0.5 * camera.width) / f, (y + 0.5 - 0.5 * camera.height) / f,
                          1.0);
      const Vec3d dir = (rot * dir_cam).normalized();

      Vec3d color = Vec3d::Zero();
      double trans = 1.0;
      for (const auto& b : blobs) {
        // G(t) = exp(-(a t^2 - 2 bb t + c) / 2) along origin + t dir.
        const Vec3d rel = b.mu - origin;
        const double a = dir.dot(b.precision * dir);
        const double bb = dir.dot(b.precision * rel);
        const double c = rel.dot(b.precision * rel);
        const double m2 = std::max(0.0, c - bb * bb / a);
        const double peak = std::exp(-0.5 * m2);
        if (peak < 1e-12) continue;

        // Midpoint rule over +-4 sigma around the maximum along the ray.
        const double tc = bb / a;
        const double half = 4.0 / std::sqrt(a);
        const double dt = 2.0 * half / samples;
        double kept = 0.0, total = 0.0;
        for (int i = 0; i < samples; ++i) {
          const double t = tc - half + (i + 0.5) * dt;
          const double w = std::exp(-0.5 * a * (t - tc) * (t - tc));
          total += w;
          if ((origin + t * dir).dot(plane.normal()) > plane.offset()) kept += w;
        }
        if (kept == 0.0) continue;
        const double alpha = std::min(b.alpha * peak * kept / total, 0.99);
        color += trans * alpha * b.color;
        trans *= 1.0 - alpha;
      }
      color += trans * background;
      for (int c = 0; c < 3; ++c) {
        out.rgb[(std::size_t(y) * camera.width + x) * 3 + c] = static_cast<float>(color[c]);
      }
    }
  }
  return out;
}

namespace {

Vec2d pinhole(const Vec3d& world, const CameraPose& camera) {
  const Mat3d rot = camera.orientation.normalized().toRotationMatrix();
  const Vec3d right = rot.col(0), down = rot.col(1), forward = rot.col(2);
  const Vec3d rel = world - camera.position;
  const double f = 0.5 * camera.height / std::tan(0.5 * camera.vertical_fov);
  const double z = rel.dot(forward);
  return {f * rel.dot(right) / z + 0.5 * camera.width, f * rel.dot(down) / z + 0.5 * camera.height};
}

}  // namespace

ProjectionFit fit_projection(const GaussianPrimitive& prim, const CameraPose& camera) {
  const Vec3d mu = prim.position.cast<double>();
  const Mat3d r = prim.rotation.cast<double>().normalized().toRotationMatrix();

  // Each projected axis segment passes through the projected centre, so
  // their least-squares intersection recovers it.
  Mat2d normal_eq = Mat2d::Zero();
  Vec2d rhs = Vec2d::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const Vec3d half = 3.0 * double(prim.scale[axis]) * r.col(axis);
    const Vec2d a = pinhole(mu - half, camera);
    const Vec2d b = pinhole(mu + half, camera);
    // Unnormalized, so foreshortened axes weigh less.
    const Vec2d v = b - a;
    const Vec2d n(-v.y(), v.x());
    normal_eq += n * n.transpose();
    rhs += n * n.dot(a);
  }
  ProjectionFit fit;
  fit.mean = normal_eq.ldlt().solve(rhs);

  Eigen::Matrix<double, 2, 3> jac;
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    const Vec3d e = Vec3d::Unit(i) * h;
    jac.col(i) = (pinhole(mu + e, camera) - pinhole(mu - e, camera)) / (2.0 * h);
  }
  const Vec3d s2 = prim.scale.cast<double>().cwiseAbs2();
  const Mat3d sigma = r * s2.asDiagonal() * r.transpose();
  fit.cov = jac * sigma * jac.transpose() + 0.3 * Mat2d::Identity();
  return fit;
}

}  // namespace splatslice::testing
