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

// Binary asset format (little-endian throughout):
//
//   "CGSA" | version u32 = 1 | flags u32 | axis 3 x f32 | K u32 |
//   offsets K x f32 | bounds min 3 x f32, max 3 x f32 |
//   sh_degree u8 | sh_count u32 | sh_count x ((degree+1)^2 - 1) x 3 x f16 |
//   base_count u32 | base records | K x (delta_count u32 | delta records) |
//   crc32 of all preceding bytes
//
// Record (39 bytes): position 3 x f32 | scale 3 x f32 |
//   rotation u32 (smallest-three) | opacity u8 | dc 3 x f16 | sh_index u32
//
// SH coefficients are stored coefficient-major, RGB interleaved.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "splatslice/compiler.h"

namespace splatslice {

inline constexpr char kAssetMagic[4] = {'C', 'G', 'S', 'A'};
inline constexpr std::uint32_t kAssetVersion = 1;
inline constexpr std::size_t kRecordBytes = 39;
// Size of an asset with K = 1, no SH and no primitives.
inline constexpr std::size_t kEmptyAssetBytes = 73;
// Bytes added per state beyond its delta records: offset f32 + delta_count u32.
inline constexpr std::size_t kPerLayerBytes = 8;

// Round-trip tolerances of the stored attributes. Positions and scales are
// stored exactly as f32.
inline constexpr double kRotationTolerance = 2e-3;        // per component, up to sign
inline constexpr double kOpacityTolerance = 1.0 / 510.0;  // 8-bit fixed point

// Smallest-three quaternion packing: bits 30..31 hold the index of the
// largest-magnitude component (0 = w, 1 = x, 2 = y, 3 = z), which is made
// positive and dropped; the other three, in w,x,y,z order, occupy bits
// 20..29, 10..19 and 0..9 as codes c in [0, 1022] for (c - 511) / 511 / sqrt(2).
std::uint32_t pack_rotation(const Eigen::Quaternionf& q);
Eigen::Quaternionf unpack_rotation(std::uint32_t packed);

std::uint8_t pack_opacity(float opacity);
float unpack_opacity(std::uint8_t code);

// Deterministic: equal assets give equal bytes.
std::string encode_asset(const LayeredAsset& asset);

// Throws FormatError (bad magic, version or contents), LengthError
// (truncated input) or IntegrityError (CRC mismatch).
LayeredAsset decode_asset(std::string_view bytes);

// The same primitive after a trip through the record encoding.
GaussianPrimitive quantize_primitive(const GaussianPrimitive& prim);

}  // namespace splatslice
