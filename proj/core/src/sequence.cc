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

#include "splatslice/sequence.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "splatslice/errors.h"
#include "splatslice/parallel.h"

namespace splatslice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Vec3d normalized_axis(const Vec3d& axis) {
  const double len = axis.norm();
  if (!std::isfinite(len) || len == 0.0) {
    throw ManifestError("axis must be a non-zero finite 3-vector");
  }
  return axis / len;
}

// Sort permutation by offset, rejecting duplicates.
std::vector<std::size_t> offset_order(const std::vector<double>& offsets) {
  std::vector<std::size_t> order(offsets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (!std::isfinite(offsets[i])) throw ManifestError("offset " + std::to_string(i) + " is not finite");
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (offsets[order[i]] == offsets[order[i - 1]]) {
      throw ManifestError("duplicate offset " + std::to_string(offsets[order[i]]));
    }
  }
  return order;
}

}  // namespace

StateSequence make_state_sequence(std::vector<GaussianCloud> states,
                                  std::vector<double> offsets, Vec3d axis) {
  if (states.empty()) throw ManifestError("a state sequence needs at least one state");
  if (states.size() != offsets.size()) {
    throw ManifestError("state count " + std::to_string(states.size()) +
                        " does not match offset count " + std::to_string(offsets.size()));
  }
  const auto order = offset_order(offsets);

  StateSequence seq;
  seq.axis = normalized_axis(axis);
  seq.states.reserve(states.size());
  seq.offsets.reserve(states.size());
  for (std::size_t i : order) {
    seq.states.push_back(std::move(states[i]));
    seq.offsets.push_back(offsets[i]);
  }
  return seq;
}

Manifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");

  Manifest m;
  const auto axis_it = doc.find("axis");
  if (axis_it == doc.end() || !axis_it->is_array() || axis_it->size() != 3) {
    throw ManifestError("'axis' must be an array of 3 numbers");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(*axis_it)[i].is_number()) throw ManifestError("'axis' must be an array of 3 numbers");
    m.axis[i] = (*axis_it)[i].get<double>();
  }
  m.axis = normalized_axis(m.axis);

  const auto states_it = doc.find("states");
  if (states_it == doc.end() || !states_it->is_array()) {
    throw ManifestError("'states' must be an array");
  }
  if (states_it->empty()) throw ManifestError("'states' must list at least one state");

  std::vector<double> offsets;
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < states_it->size(); ++i) {
    const json& s = (*states_it)[i];
    const std::string where = "states[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ManifestError(where + " must be an object");
    const auto p = s.find("path");
    const auto o = s.find("offset");
    if (p == s.end() || !p->is_string()) throw ManifestError(where + ".path must be a string");
    if (o == s.end() || !o->is_number()) throw ManifestError(where + ".offset must be a number");
    fs::path path = fs::path(p->get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    entries.push_back({path, o->get<double>()});
    offsets.push_back(entries.back().offset);
  }
  for (std::size_t i : offset_order(offsets)) m.states.push_back(entries[i]);
  return m;
}

Manifest read_manifest(const fs::path& manifest_path) {
  return parse_manifest(read_file(manifest_path), manifest_path.parent_path());
}

std::string manifest_to_json(const Manifest& manifest, const fs::path& relative_to) {
  json doc;
  doc["axis"] = {manifest.axis.x(), manifest.axis.y(), manifest.axis.z()};
  doc["states"] = json::array();
  for (const auto& e : manifest.states) {
    const fs::path rel = relative_to.empty() ? e.path : e.path.lexically_relative(relative_to);
    doc["states"].push_back({{"path", rel.generic_string()}, {"offset", e.offset}});
  }
  return doc.dump(2) + "\n";
}

StateSequence load_state_sequence(const Manifest& manifest) {
  if (manifest.states.empty()) throw ManifestError("manifest lists no states");
  std::vector<GaussianCloud> states(manifest.states.size());
  std::vector<double> offsets(manifest.states.size());
  parallel_for(manifest.states.size(), [&](std::size_t i) {
    const auto& entry = manifest.states[i];
    states[i] = parse_ply(read_file(entry.path), entry.path.filename().string());
    offsets[i] = entry.offset;
  });
  return make_state_sequence(std::move(states), std::move(offsets), manifest.axis);
}

StateSequence load_state_sequence(const fs::path& manifest_path) {
  return load_state_sequence(read_manifest(manifest_path));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open file for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string(), "read failed");
  return bytes;
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open file for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace splatslice
