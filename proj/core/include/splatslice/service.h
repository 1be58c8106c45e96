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

// Local request/response service: case listing, lazy case loading and frame
// rendering for interactive clients.
//
//   GET  /healthz  -> 200 "ok"
//   GET  /cases    -> {"cases": [CaseDescriptor...], "warnings": [...]}
//   POST /render   -> frame bytes; PNG when the Accept header asks for
//                     image/png, otherwise raw RGBA8 with X-Width/X-Height.
//                     X-State-Index and X-Render-Ms accompany both.

#pragma once

#include <cstddef>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "splatslice/compiler.h"
#include "splatslice/errors.h"
#include "splatslice/renderer.h"

namespace splatslice {

inline constexpr std::size_t kMaxRequestPixels = 2'073'600;
inline constexpr const char* kAssetExtension = ".cgsa";

class NotFound : public Error {
 public:
  using Error::Error;
};

// A malformed request; `field` names the offending member, e.g. "plane.normal".
class BadRequest : public InvalidArgument {
 public:
  BadRequest(std::string field, const std::string& what)
      : InvalidArgument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// The host environment refused something (e.g. the port is taken).
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

struct CaseDescriptor {
  std::string case_id;
  std::string display_name;
  std::size_t states = 0;
  std::size_t base_count = 0;
  std::size_t delta_total = 0;
  std::size_t max_state_primitives = 0;
  std::size_t sh_count = 0;
  Aabb bounds;
  float offset_min = 0.0f;
  float offset_max = 0.0f;
};

struct CaseListing {
  std::vector<CaseDescriptor> cases;
  std::vector<std::string> warnings;  // one per asset that failed to decode
};

std::string case_listing_json(const CaseListing& listing);

struct RenderRequest {
  std::string case_id;
  SlicingPlane plane{Vec3d::UnitZ(), 0.0};
  CameraPose camera;
  RenderMode mode = RenderMode::kModulated;
  double k_sigma = kDefaultKSigma;
};

// Parses a JSON request body. Throws BadRequest naming the field at fault.
RenderRequest parse_render_request(std::string_view body);
std::string render_request_json(const RenderRequest& request);

struct RenderResult {
  FrameImage frame;
  std::size_t state_index = 0;
  double render_ms = 0.0;
};

// Assets of one directory, decoded on first use and then shared read-only.
// Loads of different cases proceed independently.
class CaseStore {
 public:
  explicit CaseStore(std::filesystem::path dir);

  CaseListing list_cases();
  // Throws NotFound for unknown ids, FormatError for undecodable assets.
  std::shared_ptr<const LayeredAsset> load(const std::string& case_id);
  RenderResult render(const RenderRequest& request);

  const std::filesystem::path& directory() const { return dir_; }

 private:
  using AssetFuture = std::shared_future<std::shared_ptr<const LayeredAsset>>;

  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, AssetFuture> cache_;
};

// HTTP front end over a CaseStore.
class ViewerServer {
 public:
  explicit ViewerServer(CaseStore& store);
  ~ViewerServer();
  ViewerServer(const ViewerServer&) = delete;
  ViewerServer& operator=(const ViewerServer&) = delete;

  // Binds without serving yet. Port 0 picks a free port. Returns the bound
  // port; throws EnvironmentError when binding fails.
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace splatslice
