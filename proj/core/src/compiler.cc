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

#include "splatslice/compiler.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "splatslice/errors.h"
#include "splatslice/half.h"
#include "splatslice/parallel.h"

namespace splatslice {
namespace {

constexpr std::size_t kMaxShCoeffs = ShCoefficients::coeff_count(3);

std::int64_t snap(double v, double step) { return std::llround(v / step); }

// Payload as half bits, zero-padded to degree 3 so that payloads of different
// degrees compare consistently.
std::u16string payload_key(const ShCoefficients& sh) {
  std::u16string key(3 * kMaxShCoeffs, char16_t{0});
  for (std::size_t j = 0; j < sh.coeffs.size() && j < kMaxShCoeffs; ++j) {
    for (int c = 0; c < 3; ++c) {
      key[3 * j + c] = static_cast<char16_t>(half_bits(sh.coeffs[j][c]));
    }
  }
  return key;
}

void intern_state(GaussianCloud& cloud, ShInterner& interner) {
  for (auto& p : cloud.primitives) {
    if (!p.has_sh()) continue;
    if (p.sh_index >= cloud.sh_table.size()) {
      throw CompileError("state '" + cloud.source_name + "' references missing SH entry " +
                         std::to_string(p.sh_index));
    }
    p.sh_index = interner.intern(cloud.sh_table[p.sh_index]);
  }
  cloud.sh_table.clear();
  cloud.sh_table.shrink_to_fit();
}

void remap_state(GaussianCloud& cloud, const std::vector<std::uint32_t>& remap) {
  for (auto& p : cloud.primitives) {
    if (p.has_sh()) p.sh_index = remap[p.sh_index];
  }
}

Aabb bounds_of(const StateSequence& seq) {
  bool any = false;
  Aabb box;
  for (const auto& state : seq.states) {
    for (const auto& p : state.primitives) {
      if (!any) {
        box.min = box.max = p.position;
        any = true;
      } else {
        box.min = box.min.cwiseMin(p.position);
        box.max = box.max.cwiseMax(p.position);
      }
    }
  }
  return box;
}

}  // namespace

std::string IdentityKey::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
  os << ')';
  return os.str();
}

std::size_t IdentityKeyHash::operator()(const IdentityKey& k) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::int64_t v : k.q) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

IdentityKey make_identity_key(const GaussianPrimitive& p) {
  Eigen::Vector4d q(p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z());
  // q and -q are the same rotation.
  for (int i = 0; i < 4; ++i) {
    if (q[i] != 0.0) {
      if (q[i] < 0.0) q = -q;
      break;
    }
  }

  IdentityKey key;
  std::size_t i = 0;
  for (int a = 0; a < 3; ++a) key.q[i++] = snap(p.position[a], kKeyPositionStep);
  for (int a = 0; a < 3; ++a) key.q[i++] = snap(p.scale[a], kKeyScaleStep);
  for (int a = 0; a < 4; ++a) key.q[i++] = snap(q[a], kKeyRotationStep);
  key.q[i++] = snap(p.opacity, kKeyOpacityStep);
  for (int a = 0; a < 3; ++a) key.q[i++] = snap(p.dc_color[a], kKeyColorStep);
  key.q[i++] = p.has_sh() ? static_cast<std::int64_t>(p.sh_index) : -1;
  return key;
}

std::uint32_t ShInterner::intern(const ShCoefficients& sh) {
  max_degree_ = std::max(max_degree_, sh.degree);
  auto key = payload_key(sh);
  const auto [it, inserted] = ids_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) keys_.push_back(std::move(key));
  return it->second;
}

ShInterner::Table ShInterner::finish() const {
  Table table;
  table.degree = keys_.empty() ? 0 : std::max(1, max_degree_);

  std::vector<std::uint32_t> order(keys_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return keys_[a] < keys_[b]; });

  const std::size_t m = ShCoefficients::coeff_count(table.degree);
  table.remap.resize(keys_.size());
  table.entries.reserve(keys_.size());
  for (std::uint32_t final_idx = 0; final_idx < order.size(); ++final_idx) {
    const auto& key = keys_[order[final_idx]];
    table.remap[order[final_idx]] = final_idx;
    ShCoefficients sh;
    sh.degree = table.degree;
    sh.coeffs.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      for (int c = 0; c < 3; ++c) sh.coeffs[j][c] = half_to_float(key[3 * j + c]);
    }
    table.entries.push_back(std::move(sh));
  }
  return table;
}

DedupedSequence dedup_sh(StateSequence seq) {
  ShInterner interner;
  for (auto& state : seq.states) intern_state(state, interner);
  auto table = interner.finish();
  for (auto& state : seq.states) remap_state(state, table.remap);

  DedupedSequence out;
  out.sequence = std::move(seq);
  out.sh_degree = table.degree;
  out.sh_table = std::move(table.entries);
  return out;
}

std::size_t LayeredAsset::delta_total() const {
  std::size_t n = 0;
  for (const auto& d : delta_layers) n += d.size();
  return n;
}

LayeredAsset consolidate(DedupedSequence deduped) {
  const StateSequence& seq = deduped.sequence;
  const std::size_t k_states = seq.size();
  if (k_states == 0) throw CompileError("cannot compile an empty state sequence");

  LayeredAsset asset;
  asset.axis = seq.axis.cast<float>();
  asset.offsets.reserve(k_states);
  for (std::size_t k = 0; k < k_states; ++k) {
    asset.offsets.push_back(static_cast<float>(seq.offsets[k]));
    if (k > 0 && !(asset.offsets[k] > asset.offsets[k - 1])) {
      throw CompileError("offsets " + std::to_string(seq.offsets[k - 1]) + " and " +
                         std::to_string(seq.offsets[k]) + " are not distinct in single precision");
    }
  }
  asset.sh_degree = deduped.sh_degree;
  asset.bounds = bounds_of(seq);

  // Keys of every state, sorted, with duplicate detection.
  std::vector<std::vector<std::pair<IdentityKey, std::uint32_t>>> keyed(k_states);
  parallel_for(k_states, [&](std::size_t k) {
    const auto& prims = seq.states[k].primitives;
    auto& keys = keyed[k];
    keys.reserve(prims.size());
    for (std::uint32_t i = 0; i < prims.size(); ++i) keys.emplace_back(make_identity_key(prims[i]), i);
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i) {
      if (keys[i].first == keys[i - 1].first) {
        throw CompileError("state " + std::to_string(k) + " ('" + seq.states[k].source_name +
                           "') contains primitive key " + keys[i].first.to_string() + " twice");
      }
    }
  });

  std::unordered_map<IdentityKey, std::uint32_t, IdentityKeyHash> presence;
  for (const auto& keys : keyed) {
    for (const auto& [key, idx] : keys) ++presence[key];
  }

  const auto in_base = [&](const IdentityKey& key) { return presence.at(key) == k_states; };

  for (const auto& [key, idx] : keyed[0]) {
    if (in_base(key)) asset.base_layer.push_back(seq.states[0].primitives[idx]);
  }
  asset.delta_layers.resize(k_states);
  for (std::size_t k = 0; k < k_states; ++k) {
    for (const auto& [key, idx] : keyed[k]) {
      if (!in_base(key)) asset.delta_layers[k].push_back(seq.states[k].primitives[idx]);
    }
    keyed[k].clear();
    keyed[k].shrink_to_fit();
  }
  asset.sh_table = std::move(deduped.sh_table);
  return asset;
}

GaussianCloud reconstruct_state(const LayeredAsset& asset, std::size_t k) {
  if (k >= asset.state_count()) {
    throw IndexError("state index " + std::to_string(k) + " out of range [0, " +
                     std::to_string(asset.state_count()) + ")");
  }
  GaussianCloud cloud;
  cloud.source_name = "state " + std::to_string(k);
  cloud.primitives.reserve(asset.base_layer.size() + asset.delta_layers[k].size());
  cloud.primitives = asset.base_layer;
  cloud.primitives.insert(cloud.primitives.end(), asset.delta_layers[k].begin(),
                          asset.delta_layers[k].end());
  cloud.sh_table = asset.sh_table;
  return cloud;
}

LayeredAsset compile_sequence(StateSequence seq) { return consolidate(dedup_sh(std::move(seq))); }

CompileResult compile_manifest(const Manifest& manifest) {
  if (manifest.states.empty()) throw ManifestError("manifest lists no states");
  const std::size_t k_states = manifest.states.size();

  CompileResult result;
  ShInterner interner;
  std::vector<GaussianCloud> states(k_states);
  std::vector<double> offsets(k_states);
  std::vector<std::uint64_t> sizes(k_states);

  // Parse a batch concurrently, then intern it sequentially so provisional
  // ids are assigned in manifest order.
  const std::size_t batch = std::max<std::size_t>(1, worker_count());
  for (std::size_t first = 0; first < k_states; first += batch) {
    const std::size_t count = std::min(batch, k_states - first);
    parallel_for(count, [&](std::size_t j) {
      const auto& entry = manifest.states[first + j];
      const std::string bytes = read_file(entry.path);
      sizes[first + j] = bytes.size();
      states[first + j] = parse_ply(bytes, entry.path.filename().string());
      offsets[first + j] = entry.offset;
    });
    for (std::size_t j = 0; j < count; ++j) intern_state(states[first + j], interner);
  }

  auto table = interner.finish();
  for (auto& state : states) remap_state(state, table.remap);

  DedupedSequence deduped;
  deduped.sequence = make_state_sequence(std::move(states), std::move(offsets), manifest.axis);
  deduped.sh_degree = table.degree;
  deduped.sh_table = std::move(table.entries);

  result.asset = consolidate(std::move(deduped));
  result.stats.input_bytes = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  result.stats.states = k_states;
  result.stats.base_count = result.asset.base_layer.size();
  result.stats.delta_total = result.asset.delta_total();
  result.stats.sh_count = result.asset.sh_table.size();
  return result;
}

}  // namespace splatslice
