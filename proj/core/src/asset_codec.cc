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

#include "splatslice/asset_codec.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include <zlib.h>

#include "splatslice/errors.h"
#include "splatslice/half.h"

namespace splatslice {

static_assert(std::endian::native == std::endian::little,
              "the asset codec assumes a little-endian host");

namespace {

constexpr double kMaxSmall = std::numbers::sqrt2 / 2.0;
constexpr int kRotationMid = 511;
constexpr std::uint32_t kCodeMask = 0x3FF;

double code_to_component(std::uint32_t code) {
  return (static_cast<double>(code) - kRotationMid) / kRotationMid * kMaxSmall;
}

std::uint32_t component_to_code(double v) {
  const long c = std::lround(v / kMaxSmall * kRotationMid) + kRotationMid;
  return static_cast<std::uint32_t>(std::clamp<long>(c, 0, 2 * kRotationMid));
}

// Index of the largest |component|, first index on ties.
int largest_index(const double (&c)[4]) {
  int idx = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(c[i]) > std::abs(c[idx])) idx = i;
  }
  return idx;
}

std::uint32_t assemble(int idx, const std::uint32_t (&codes)[3]) {
  return (static_cast<std::uint32_t>(idx) << 30) | (codes[0] << 20) | (codes[1] << 10) | codes[2];
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void put_bytes(const char* p, std::size_t n) { out_.append(p, n); }
  void put_vec3(const Vec3f& v) {
    for (int a = 0; a < 3; ++a) put<float>(v[a]);
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Vec3f get_vec3() {
    Vec3f v;
    for (int a = 0; a < 3; ++a) v[a] = get<float>();
    return v;
  }
  void need(std::size_t n) const {
    if (n > bytes_.size() - pos_) throw LengthError(pos_ + n, bytes_.size());
  }
  void need_items(std::size_t count, std::size_t item_bytes) const {
    if (item_bytes != 0 && count > (bytes_.size() - pos_) / item_bytes) {
      throw LengthError(pos_ + count * item_bytes, bytes_.size());
    }
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

void write_record(Writer& w, const GaussianPrimitive& p) {
  w.put_vec3(p.position);
  w.put_vec3(p.scale);
  w.put<std::uint32_t>(pack_rotation(p.rotation));
  w.put<std::uint8_t>(pack_opacity(p.opacity));
  for (int a = 0; a < 3; ++a) w.put<std::uint16_t>(half_bits(p.dc_color[a]));
  w.put<std::uint32_t>(p.sh_index);
}

GaussianPrimitive read_record(Reader& r) {
  GaussianPrimitive p;
  p.position = r.get_vec3();
  p.scale = r.get_vec3();
  p.rotation = unpack_rotation(r.get<std::uint32_t>());
  p.opacity = unpack_opacity(r.get<std::uint8_t>());
  for (int a = 0; a < 3; ++a) p.dc_color[a] = half_to_float(r.get<std::uint16_t>());
  p.sh_index = r.get<std::uint32_t>();
  return p;
}

void read_layer(Reader& r, std::vector<GaussianPrimitive>& layer) {
  const auto count = r.get<std::uint32_t>();
  r.need_items(count, kRecordBytes);
  layer.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) layer.push_back(read_record(r));
}

void check_layer(const std::vector<GaussianPrimitive>& layer, std::size_t sh_count,
                 const char* name) {
  for (std::size_t i = 0; i < layer.size(); ++i) {
    const auto& p = layer[i];
    if (p.has_sh() && p.sh_index >= sh_count) {
      throw FormatError(std::string(name) + " record " + std::to_string(i) +
                        " references SH entry " + std::to_string(p.sh_index) + " of " +
                        std::to_string(sh_count));
    }
    if (!p.position.allFinite() || !p.scale.allFinite() || !(p.scale.array() > 0.0f).all()) {
      throw FormatError(std::string(name) + " record " + std::to_string(i) +
                        " has invalid position or scale");
    }
  }
}

}  // namespace

std::uint32_t pack_rotation(const Eigen::Quaternionf& q) {
  double c[4] = {q.w(), q.x(), q.y(), q.z()};
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  if (!(n > 0.0) || !std::isfinite(n)) return assemble(0, {511, 511, 511});
  for (double& v : c) v /= n;

  const int idx = largest_index(c);
  if (c[idx] < 0.0) {
    for (double& v : c) v = -v;
  }

  std::uint32_t codes[3];
  int small[3];
  for (int i = 0, j = 0; i < 4; ++i) {
    if (i == idx) continue;
    small[j] = i;
    codes[j++] = component_to_code(c[i]);
  }

  // The dropped component must stay strictly the largest after decoding,
  // otherwise a re-encode would pick a different index. Near ties, pull the
  // offending code one step toward zero.
  for (int iter = 0; iter < 8; ++iter) {
    const Eigen::Quaternionf d = unpack_rotation(assemble(idx, codes));
    const double dc[4] = {d.w(), d.x(), d.y(), d.z()};
    int worst = -1;
    for (int j = 0; j < 3; ++j) {
      if (std::abs(dc[small[j]]) + 1e-6 >= dc[idx] &&
          (worst < 0 || std::abs(dc[small[j]]) > std::abs(dc[small[worst]]))) {
        worst = j;
      }
    }
    if (worst < 0) break;
    if (codes[worst] > static_cast<std::uint32_t>(kRotationMid)) {
      --codes[worst];
    } else if (codes[worst] < static_cast<std::uint32_t>(kRotationMid)) {
      ++codes[worst];
    }
  }
  return assemble(idx, codes);
}

Eigen::Quaternionf unpack_rotation(std::uint32_t packed) {
  const int idx = static_cast<int>(packed >> 30);
  const std::uint32_t codes[3] = {(packed >> 20) & kCodeMask, (packed >> 10) & kCodeMask,
                                  packed & kCodeMask};
  double c[4];
  double sum = 0.0;
  for (int i = 0, j = 0; i < 4; ++i) {
    if (i == idx) continue;
    c[i] = code_to_component(codes[j++]);
    sum += c[i] * c[i];
  }
  c[idx] = std::sqrt(std::max(0.0, 1.0 - sum));
  return Eigen::Quaternionf(static_cast<float>(c[0]), static_cast<float>(c[1]),
                            static_cast<float>(c[2]), static_cast<float>(c[3]));
}

std::uint8_t pack_opacity(float opacity) {
  const double o = std::clamp(static_cast<double>(opacity), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(o * 255.0));
}

float unpack_opacity(std::uint8_t code) { return static_cast<float>(code / 255.0); }

GaussianPrimitive quantize_primitive(const GaussianPrimitive& prim) {
  GaussianPrimitive q = prim;
  q.rotation = unpack_rotation(pack_rotation(prim.rotation));
  q.opacity = unpack_opacity(pack_opacity(prim.opacity));
  for (int a = 0; a < 3; ++a) q.dc_color[a] = round_to_half(prim.dc_color[a]);
  return q;
}

std::string encode_asset(const LayeredAsset& asset) {
  const std::size_t k_states = asset.state_count();
  if (k_states == 0) throw InvalidArgument("asset has no states");
  if (asset.delta_layers.size() != k_states) {
    throw InvalidArgument("asset has " + std::to_string(asset.delta_layers.size()) +
                          " delta layers for " + std::to_string(k_states) + " states");
  }
  if (asset.sh_degree < 0 || asset.sh_degree > 3 || (asset.sh_degree == 0 && !asset.sh_table.empty())) {
    throw InvalidArgument("asset SH degree must be 1..3 (or 0 with an empty table)");
  }
  const std::size_t m = asset.sh_degree > 0 ? ShCoefficients::coeff_count(asset.sh_degree) : 0;

  Writer w;
  w.put_bytes(kAssetMagic, 4);
  w.put<std::uint32_t>(kAssetVersion);
  w.put<std::uint32_t>(0);  // flags
  w.put_vec3(asset.axis);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(k_states));
  for (float o : asset.offsets) w.put<float>(o);
  w.put_vec3(asset.bounds.min);
  w.put_vec3(asset.bounds.max);

  w.put<std::uint8_t>(static_cast<std::uint8_t>(asset.sh_degree));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(asset.sh_table.size()));
  for (const auto& sh : asset.sh_table) {
    if (sh.coeffs.size() != m) throw InvalidArgument("SH table entry does not match the asset degree");
    for (const auto& c : sh.coeffs) {
      for (int a = 0; a < 3; ++a) w.put<std::uint16_t>(half_bits(c[a]));
    }
  }

  w.put<std::uint32_t>(static_cast<std::uint32_t>(asset.base_layer.size()));
  for (const auto& p : asset.base_layer) write_record(w, p);
  for (const auto& layer : asset.delta_layers) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(layer.size()));
    for (const auto& p : layer) write_record(w, p);
  }

  const std::uint32_t crc = crc_of(w.str().data(), w.str().size());
  w.put<std::uint32_t>(crc);
  return std::move(w.str());
}

LayeredAsset decode_asset(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kAssetMagic, 4) != 0) {
    throw FormatError("bad magic: not a CGSA asset");
  }
  Reader r(bytes);
  r.get<std::uint32_t>();  // magic
  const auto version = r.get<std::uint32_t>();
  if (version != kAssetVersion) {
    throw FormatError("unsupported asset version " + std::to_string(version));
  }
  r.get<std::uint32_t>();  // flags, reserved

  LayeredAsset asset;
  asset.axis = r.get_vec3();
  const auto k_states = r.get<std::uint32_t>();
  r.need_items(k_states, sizeof(float));
  asset.offsets.reserve(k_states);
  for (std::uint32_t k = 0; k < k_states; ++k) asset.offsets.push_back(r.get<float>());
  asset.bounds.min = r.get_vec3();
  asset.bounds.max = r.get_vec3();

  asset.sh_degree = r.get<std::uint8_t>();
  if (asset.sh_degree > 3) throw FormatError("SH degree " + std::to_string(asset.sh_degree) + " > 3");
  const auto sh_count = r.get<std::uint32_t>();
  if (asset.sh_degree == 0 && sh_count != 0) throw FormatError("SH entries present with degree 0");
  const std::size_t m = asset.sh_degree > 0 ? ShCoefficients::coeff_count(asset.sh_degree) : 0;
  r.need_items(sh_count, m * 3 * sizeof(std::uint16_t));
  asset.sh_table.reserve(sh_count);
  for (std::uint32_t i = 0; i < sh_count; ++i) {
    ShCoefficients sh;
    sh.degree = asset.sh_degree;
    sh.coeffs.resize(m);
    for (auto& c : sh.coeffs) {
      for (int a = 0; a < 3; ++a) c[a] = half_to_float(r.get<std::uint16_t>());
    }
    asset.sh_table.push_back(std::move(sh));
  }

  read_layer(r, asset.base_layer);
  asset.delta_layers.resize(k_states);
  for (auto& layer : asset.delta_layers) read_layer(r, layer);

  const std::size_t body = r.pos();
  const auto stored_crc = r.get<std::uint32_t>();
  if (r.remaining() != 0) {
    throw FormatError(std::to_string(r.remaining()) + " unexpected trailing bytes");
  }
  const std::uint32_t actual_crc = crc_of(bytes.data(), body);
  if (stored_crc != actual_crc) {
    throw IntegrityError("checksum mismatch: stored " + std::to_string(stored_crc) +
                         ", computed " + std::to_string(actual_crc));
  }

  if (k_states == 0) throw FormatError("asset declares zero states");
  const double axis_norm = asset.axis.cast<double>().norm();
  if (!(std::abs(axis_norm - 1.0) < 1e-5)) throw FormatError("axis is not a unit vector");
  for (std::size_t k = 1; k < asset.offsets.size(); ++k) {
    if (!(asset.offsets[k] > asset.offsets[k - 1])) {
      throw FormatError("offsets are not strictly increasing");
    }
  }
  check_layer(asset.base_layer, sh_count, "base");
  for (const auto& layer : asset.delta_layers) check_layer(layer, sh_count, "delta");
  return asset;
}

}  // namespace splatslice
