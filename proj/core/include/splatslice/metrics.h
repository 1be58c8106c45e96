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

#include "splatslice/renderer.h"

namespace splatslice {

// PSNR returned for identical images.
inline constexpr double kPsnrCapDb = 99.0;

// SSIM parameters: 11x11 Gaussian window with sigma 1.5, K1 = 0.01,
// K2 = 0.03, dynamic range 255, computed on Rec.601 luma and averaged over
// windows that lie fully inside the image.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

// 20 log10(255) - 10 log10(MSE) over the RGB channels; alpha is ignored.
// Capped at kPsnrCapDb. Throws InvalidArgument on a size mismatch.
double psnr(const FrameImage& a, const FrameImage& b);

// Throws InvalidArgument on a size mismatch or when either side is smaller
// than the window.
double ssim(const FrameImage& a, const FrameImage& b);

MetricReport compare_images(const FrameImage& a, const FrameImage& b);

}  // namespace splatslice
