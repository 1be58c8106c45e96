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

#include "splatslice/renderer.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "splatslice/errors.h"
#include "splatslice/parallel.h"
#include "splatslice/slicing.h"

namespace splatslice {
namespace {

// Terms whose alpha falls below this are skipped; it bounds the per-splat
// footprint without measurably changing the sum.
constexpr double kNegligibleAlpha = 1e-9;

struct SplatFootprint {
  double inv_xx, inv_xy, inv_yy;  // conic
  int x0, x1, y0, y1;             // inclusive pixel range
};

bool footprint(const ProjectedSplat& s, int width, int height, SplatFootprint& fp) {
  const double det = s.cov.determinant();
  if (!(det > 0.0) || !(s.opacity > kNegligibleAlpha)) return false;
  fp.inv_xx = s.cov(1, 1) / det;
  fp.inv_xy = -s.cov(0, 1) / det;
  fp.inv_yy = s.cov(0, 0) / det;

  const double r = std::sqrt(2.0 * std::log(s.opacity / kNegligibleAlpha));
  const double hx = r * std::sqrt(s.cov(0, 0));
  const double hy = r * std::sqrt(s.cov(1, 1));
  // Pixel i covers centers at i + 0.5.
  fp.x0 = std::max(0, static_cast<int>(std::floor(s.mean.x() - hx - 0.5)));
  fp.x1 = std::min(width - 1, static_cast<int>(std::ceil(s.mean.x() + hx - 0.5)));
  fp.y0 = std::max(0, static_cast<int>(std::floor(s.mean.y() - hy - 0.5)));
  fp.y1 = std::min(height - 1, static_cast<int>(std::ceil(s.mean.y() + hy - 0.5)));
  return fp.x0 <= fp.x1 && fp.y0 <= fp.y1;
}

}  // namespace

std::string_view to_string(RenderMode mode) {
  switch (mode) {
    case RenderMode::kUnsliced: return "unsliced";
    case RenderMode::kHard: return "hard";
    case RenderMode::kModulated: return "modulated";
  }
  return "unknown";
}

std::optional<RenderMode> parse_render_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "unsliced") return RenderMode::kUnsliced;
  if (lower == "hard") return RenderMode::kHard;
  if (lower == "modulated") return RenderMode::kModulated;
  return std::nullopt;
}

std::size_t select_state(const LayeredAsset& asset, const SlicingPlane& plane) {
  const std::size_t k_states = asset.state_count();
  if (k_states == 0) throw InvalidArgument("asset has no states");

  const Vec3d lo = asset.bounds.min.cast<double>();
  const Vec3d hi = asset.bounds.max.cast<double>();
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -dmin;
  for (int corner = 0; corner < 8; ++corner) {
    const Vec3d p((corner & 1) ? hi.x() : lo.x(), (corner & 2) ? hi.y() : lo.y(),
                  (corner & 4) ? hi.z() : lo.z());
    const double d = signed_distance(p, plane);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (dmin > 0.0 || dmax < 0.0) return k_states - 1;

  const Vec3d centroid = asset.bounds.center();
  const Vec3d closest = centroid - signed_distance(centroid, plane) * plane.normal();
  const double e = closest.dot(asset.axis.cast<double>());

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_states; ++k) {
    const double dist = std::abs(static_cast<double>(asset.offsets[k]) - e);
    if (dist <= best_dist) {  // ties go to the larger offset
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

ActiveSet active_set(const LayeredAsset& asset, std::size_t k) {
  if (k >= asset.state_count() || k >= asset.delta_layers.size()) {
    throw IndexError("state index " + std::to_string(k) + " out of range [0, " +
                     std::to_string(asset.state_count()) + ")");
  }
  return ActiveSet(asset.base_layer, asset.delta_layers[k]);
}

std::optional<ProjectedSplat> project_gaussian(const GaussianPrimitive& prim,
                                               const CameraPose& camera,
                                               const ShCoefficients* sh) {
  const Mat3d cam_to_world = camera.orientation.normalized().toRotationMatrix();
  const Mat3d world_to_cam = cam_to_world.transpose();
  const Vec3d mu = prim.position.cast<double>();
  const Vec3d t = world_to_cam * (mu - camera.position);
  const double z = t.z();
  if (z <= camera.near) return std::nullopt;

  const double f = camera.focal_length();
  const double cx = 0.5 * camera.width;
  const double cy = 0.5 * camera.height;

  ProjectedSplat s;
  s.mean = Vec2d(f * t.x() / z + cx, f * t.y() / z + cy);
  s.depth = z;

  Eigen::Matrix<double, 2, 3> jac;
  jac << f / z, 0.0, -f * t.x() / (z * z),
         0.0, f / z, -f * t.y() / (z * z);
  const Mat3d sigma_cam = world_to_cam * covariance(prim) * cam_to_world;
  Mat2d cov = jac * sigma_cam * jac.transpose();
  cov = 0.5 * (cov + cov.transpose());
  cov(0, 0) += kScreenDilation;
  cov(1, 1) += kScreenDilation;
  s.cov = cov;

  const double hx = 3.0 * std::sqrt(cov(0, 0));
  const double hy = 3.0 * std::sqrt(cov(1, 1));
  if (s.mean.x() + hx < 0.0 || s.mean.x() - hx > camera.width || s.mean.y() + hy < 0.0 ||
      s.mean.y() - hy > camera.height) {
    return std::nullopt;
  }

  s.opacity = prim.opacity;
  s.color = evaluate_color(prim, sh, (mu - camera.position).normalized());
  return s;
}

LinearImage composite_linear(std::span<const ProjectedSplat> splats, int width, int height,
                             const Vec3d& background) {
  if (width < 1 || height < 1) throw InvalidArgument("viewport must have positive area");
  for (std::size_t i = 1; i < splats.size(); ++i) {
    if (splats[i].depth < splats[i - 1].depth) {
      throw ContractViolation("splats are not depth-sorted at index " + std::to_string(i));
    }
  }

  std::vector<SplatFootprint> prints(splats.size());
  std::vector<char> visible(splats.size());
  for (std::size_t i = 0; i < splats.size(); ++i) {
    visible[i] = footprint(splats[i], width, height, prints[i]);
  }

  const std::size_t n_pixels = std::size_t(width) * std::size_t(height);
  std::vector<double> color(n_pixels * 3, 0.0);
  std::vector<double> trans(n_pixels, 1.0);

  // Bands of rows are independent; within a band every pixel sees the splats
  // in sorted order.
  const std::size_t bands = std::min<std::size_t>(worker_count(), std::size_t(height));
  const int band_rows = static_cast<int>((height + bands - 1) / bands);
  parallel_for(bands, [&](std::size_t band) {
    const int row0 = static_cast<int>(band) * band_rows;
    const int row1 = std::min(height - 1, row0 + band_rows - 1);
    for (std::size_t i = 0; i < splats.size(); ++i) {
      if (!visible[i]) continue;
      const auto& s = splats[i];
      const auto& fp = prints[i];
      const int y0 = std::max(fp.y0, row0);
      const int y1 = std::min(fp.y1, row1);
      for (int y = y0; y <= y1; ++y) {
        const double dy = y + 0.5 - s.mean.y();
        for (int x = fp.x0; x <= fp.x1; ++x) {
          const std::size_t p = std::size_t(y) * width + x;
          double& t = trans[p];
          if (t < kTransmittanceCutoff) continue;
          const double dx = x + 0.5 - s.mean.x();
          const double power = -0.5 * (fp.inv_xx * dx * dx + 2.0 * fp.inv_xy * dx * dy +
                                       fp.inv_yy * dy * dy);
          const double a = std::clamp(s.opacity * std::exp(power), 0.0, kMaxSplatAlpha);
          if (a < kNegligibleAlpha) continue;
          const double w = a * t;
          color[3 * p + 0] += w * s.color.x();
          color[3 * p + 1] += w * s.color.y();
          color[3 * p + 2] += w * s.color.z();
          t *= 1.0 - a;
        }
      }
    }
  });

  LinearImage out;
  out.width = width;
  out.height = height;
  out.rgb.resize(n_pixels * 3);
  for (std::size_t p = 0; p < n_pixels; ++p) {
    for (int c = 0; c < 3; ++c) {
      out.rgb[3 * p + c] = static_cast<float>(color[3 * p + c] + trans[p] * background[c]);
    }
  }
  return out;
}

std::uint8_t linear_to_srgb8(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const double s = v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
  return static_cast<std::uint8_t>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
}

FrameImage encode_srgb(const LinearImage& image) {
  FrameImage frame(image.width, image.height);
  const std::size_t n = std::size_t(image.width) * std::size_t(image.height);
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) frame.pixels[4 * p + c] = linear_to_srgb8(image.rgb[3 * p + c]);
    frame.pixels[4 * p + 3] = 255;
  }
  return frame;
}

FrameImage composite(std::span<const ProjectedSplat> splats, int width, int height,
                     const Vec3d& background) {
  return encode_srgb(composite_linear(splats, width, height, background));
}

std::vector<ProjectedSplat> prepare_splats(const LayeredAsset& asset, const SlicingPlane& plane,
                                           const CameraPose& camera, RenderMode mode,
                                           const RenderOptions& options, RenderStats* stats) {
  camera.validate();
  if (!(options.k_sigma > 0.0) || !std::isfinite(options.k_sigma)) {
    throw InvalidArgument("k_sigma must be positive");
  }

  const std::size_t k = select_state(asset, plane);
  const ActiveSet active = active_set(asset, k);

  std::vector<ProjectedSplat> splats;
  splats.reserve(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) {
    const GaussianPrimitive& prim = active[i];
    const Vec3d mu = prim.position.cast<double>();
    double alpha = prim.opacity;
    switch (mode) {
      case RenderMode::kUnsliced:
        break;
      case RenderMode::kHard:
        if (!hard_visibility(mu, plane)) continue;
        break;
      case RenderMode::kModulated:
        alpha = modulated_opacity(alpha, mu, plane,
                                  projected_radius(prim, plane.normal(), options.k_sigma));
        break;
    }
    if (alpha < kMinOpacity) continue;

    auto splat = project_gaussian(prim, camera, asset.sh_for(prim));
    if (!splat) continue;
    splat->opacity = alpha;
    splats.push_back(*splat);
  }

  std::stable_sort(splats.begin(), splats.end(),
                   [](const ProjectedSplat& a, const ProjectedSplat& b) { return a.depth < b.depth; });

  if (stats != nullptr) {
    stats->state_index = k;
    stats->active = active.size();
    stats->projected = splats.size();
  }
  return splats;
}

LinearImage render_linear(const LayeredAsset& asset, const SlicingPlane& plane,
                          const CameraPose& camera, RenderMode mode, const RenderOptions& options,
                          RenderStats* stats) {
  const auto splats = prepare_splats(asset, plane, camera, mode, options, stats);
  return composite_linear(splats, camera.width, camera.height, options.background);
}

FrameImage render(const LayeredAsset& asset, const SlicingPlane& plane, const CameraPose& camera,
                  RenderMode mode, const RenderOptions& options, RenderStats* stats) {
  return encode_srgb(render_linear(asset, plane, camera, mode, options, stats));
}

}  // namespace splatslice
