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


#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unistd.h>

#include "splatslice/sequence.h"
#include "splatslice/slicing.h"

namespace splatslice::testing {

FrameImage noise_image(int w, int h, std::uint64_t seed) {
  Lcg rng(seed);
  FrameImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* px = img.at(x, y);
      for (int c = 0; c < 3; ++c) px[c] = rng.byte();
      px[3] = 255;
    }
  }
  return img;
}

FrameImage perturbed(const FrameImage& img, std::uint64_t seed, int amplitude) {
  Lcg rng(seed);
  FrameImage out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      auto* px = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const int delta = rng.byte() % (2 * amplitude + 1) - amplitude;
        px[c] = static_cast<std::uint8_t>(std::clamp(int(px[c]) + delta, 0, 255));
      }
    }
  }
  return out;
}

FrameImage smooth_image(int w, int h, std::uint64_t seed) {
  Lcg rng(seed);
  FrameImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* px = img.at(x, y);
      const int base = (x * 255) / (w - 1);
      for (int c = 0; c < 3; ++c) {
        const int v = base + rng.byte() % 33 - 16 + 40 * c;
        px[c] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      }
      px[3] = 255;
    }
  }
  return img;
}

FrameImage solid_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  FrameImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* px = img.at(x, y);
      px[0] = r;
      px[1] = g;
      px[2] = b;
      px[3] = 255;
    }
  }
  return img;
}

GaussianPrimitive make_gaussian(const Vec3d& position, double scale, double opacity,
                                const Vec3d& rgb) {
  GaussianPrimitive g;
  g.position = position.cast<float>();
  g.scale = Vec3f::Constant(static_cast<float>(scale));
  g.opacity = static_cast<float>(opacity);
  g.dc_color = ((rgb.array() - 0.5) / sh_basis::kC0).matrix().cast<float>();
  return g;
}

GaussianPrimitive random_gaussian(std::mt19937_64& rng, double extent) {
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::uniform_real_distribution<double> log_scale(std::log(0.02), std::log(0.2));
  std::uniform_real_distribution<double> opacity(0.1, 0.95);
  std::uniform_real_distribution<double> color(-1.5, 1.5);
  std::normal_distribution<double> normal;

  GaussianPrimitive g;
  g.position = Vec3d(pos(rng), pos(rng), pos(rng)).cast<float>();
  g.scale = Vec3d(std::exp(log_scale(rng)), std::exp(log_scale(rng)), std::exp(log_scale(rng)))
                .cast<float>() * static_cast<float>(extent);
  Eigen::Quaternionf q(normal(rng), normal(rng), normal(rng), normal(rng));
  g.rotation = q.normalized();
  g.opacity = static_cast<float>(opacity(rng));
  g.dc_color = Vec3d(color(rng), color(rng), color(rng)).cast<float>();
  return g;
}

LayeredAsset single_state_asset(const std::vector<GaussianPrimitive>& prims, const Vec3d& axis,
                                double offset) {
  GaussianCloud cloud;
  cloud.primitives = prims;
  std::vector<GaussianCloud> states{std::move(cloud)};
  return compile_sequence(make_state_sequence(std::move(states), {offset}, axis));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("splatslice_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace splatslice::testing
