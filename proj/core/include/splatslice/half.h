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

// Half-precision helpers shared by the SH deduplication and the asset codec.

#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace splatslice {

inline std::uint16_t half_bits(float v) {
  return Eigen::numext::bit_cast<std::uint16_t>(Eigen::half(v));
}

inline float half_to_float(std::uint16_t bits) {
  return static_cast<float>(Eigen::half(Eigen::half_impl::raw_uint16_to_half(bits)));
}

// Nearest half-precision value, widened back to float.
inline float round_to_half(float v) { return half_to_float(half_bits(v)); }

}  // namespace splatslice
