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

#include "splatslice/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "splatslice/errors.h"

namespace splatslice {
namespace {

void require_same_size(const FrameImage& a, const FrameImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw InvalidArgument("image sizes differ: " + std::to_string(a.width) + "x" +
                          std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                          std::to_string(b.height));
  }
}

std::vector<double> luma(const FrameImage& img) {
  const std::size_t n = std::size_t(img.width) * std::size_t(img.height);
  std::vector<double> y(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint8_t* px = &img.pixels[4 * p];
    y[p] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return y;
}

std::array<double, kSsimWindow> gaussian_taps() {
  std::array<double, kSsimWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    taps[i] = std::exp(-(d * d) / (2.0 * kSsimSigma * kSsimSigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable "valid" filtering: output is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::array<double, kSsimWindow>& taps) {
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> rows(std::size_t(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += taps[i] * src[std::size_t(y) * w + x + i];
      rows[std::size_t(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(std::size_t(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += taps[i] * rows[std::size_t(y + i) * ow + x];
      out[std::size_t(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const FrameImage& a, const FrameImage& b) {
  require_same_size(a, b);
  const std::size_t n = std::size_t(a.width) * std::size_t(a.height);
  if (n == 0) throw InvalidArgument("images are empty");
  double sse = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) {
      const double d = double(a.pixels[4 * p + c]) - double(b.pixels[4 * p + c]);
      sse += d * d;
    }
  }
  if (sse == 0.0) return kPsnrCapDb;
  const double mse = sse / (3.0 * double(n));
  return std::min(kPsnrCapDb, 20.0 * std::log10(255.0) - 10.0 * std::log10(mse));
}

double ssim(const FrameImage& a, const FrameImage& b) {
  require_same_size(a, b);
  if (a.width < kSsimWindow || a.height < kSsimWindow) {
    throw InvalidArgument("SSIM needs images of at least " + std::to_string(kSsimWindow) + "x" +
                          std::to_string(kSsimWindow));
  }
  const int w = a.width;
  const int h = a.height;
  const auto taps = gaussian_taps();

  const auto x = luma(a);
  const auto y = luma(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    xx[p] = x[p] * x[p];
    yy[p] = y[p] * y[p];
    xy[p] = x[p] * y[p];
  }

  const auto mu_x = filter_valid(x, w, h, taps);
  const auto mu_y = filter_valid(y, w, h, taps);
  const auto e_xx = filter_valid(xx, w, h, taps);
  const auto e_yy = filter_valid(yy, w, h, taps);
  const auto e_xy = filter_valid(xy, w, h, taps);

  const double c1 = (kSsimK1 * 255.0) * (kSsimK1 * 255.0);
  const double c2 = (kSsimK2 * 255.0) * (kSsimK2 * 255.0);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cxy = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return std::clamp(total / double(mu_x.size()), -1.0, 1.0);
}

MetricReport compare_images(const FrameImage& a, const FrameImage& b) {
  return {psnr(a, b), ssim(a, b)};
}

}  // namespace splatslice
