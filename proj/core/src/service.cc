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

#include "splatslice/service.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "splatslice/asset_codec.h"
#include "splatslice/image_io.h"
#include "splatslice/sequence.h"

namespace splatslice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_json(const Vec3f& v) { return json::array({v.x(), v.y(), v.z()}); }

CaseDescriptor describe(const std::string& case_id, const LayeredAsset& asset) {
  CaseDescriptor d;
  d.case_id = case_id;
  d.display_name = case_id;
  std::replace(d.display_name.begin(), d.display_name.end(), '_', ' ');
  d.states = asset.state_count();
  d.base_count = asset.base_layer.size();
  d.delta_total = asset.delta_total();
  for (const auto& layer : asset.delta_layers) {
    d.max_state_primitives = std::max(d.max_state_primitives, d.base_count + layer.size());
  }
  d.sh_count = asset.sh_table.size();
  d.bounds = asset.bounds;
  d.offset_min = asset.offsets.front();
  d.offset_max = asset.offsets.back();
  return d;
}

const json& member(const json& obj, const char* key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw BadRequest(field, "is required");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw BadRequest(field, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw BadRequest(field, "must be finite");
  return d;
}

template <int N>
Eigen::Matrix<double, N, 1> number_array(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != N) {
    throw BadRequest(field, "must be an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out[i] = number(v[i], field);
  return out;
}

int positive_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw BadRequest(field, "must be an integer");
  const auto i = v.get<long long>();
  if (i < 1 || i > 1'000'000) throw BadRequest(field, "must be a positive pixel count");
  return static_cast<int>(i);
}

bool valid_case_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return id.find('/') == std::string::npos && id.find('\\') == std::string::npos;
}

}  // namespace

std::string case_listing_json(const CaseListing& listing) {
  json doc;
  doc["cases"] = json::array();
  for (const auto& c : listing.cases) {
    doc["cases"].push_back({
        {"case_id", c.case_id},
        {"display_name", c.display_name},
        {"states", c.states},
        {"base_count", c.base_count},
        {"delta_total", c.delta_total},
        {"max_state_primitives", c.max_state_primitives},
        {"sh_count", c.sh_count},
        {"bounds", {{"min", vec_json(c.bounds.min)}, {"max", vec_json(c.bounds.max)}}},
        {"offsets", {{"min", c.offset_min}, {"max", c.offset_max}}},
    });
  }
  doc["warnings"] = listing.warnings;
  return doc.dump();
}

RenderRequest parse_render_request(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw BadRequest("body", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw BadRequest("body", "must be a JSON object");

  RenderRequest req;
  const json& id = member(doc, "case_id", "case_id");
  if (!id.is_string()) throw BadRequest("case_id", "must be a string");
  req.case_id = id.get<std::string>();

  const json& plane = member(doc, "plane", "plane");
  if (!plane.is_object()) throw BadRequest("plane", "must be an object");
  const Vec3d normal = number_array<3>(member(plane, "normal", "plane.normal"), "plane.normal");
  if (normal.norm() == 0.0) throw BadRequest("plane.normal", "must be non-zero");
  const double offset = number(member(plane, "offset", "plane.offset"), "plane.offset");
  req.plane = SlicingPlane(normal, offset);

  const json& cam = member(doc, "camera", "camera");
  if (!cam.is_object()) throw BadRequest("camera", "must be an object");
  req.camera.position = number_array<3>(member(cam, "position", "camera.position"), "camera.position");
  const Eigen::Vector4d q =
      number_array<4>(member(cam, "orientation", "camera.orientation"), "camera.orientation");
  if (q.norm() == 0.0) throw BadRequest("camera.orientation", "must be a non-zero quaternion");
  req.camera.orientation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized();
  req.camera.vertical_fov =
      number(member(cam, "vertical_fov", "camera.vertical_fov"), "camera.vertical_fov");
  if (!(req.camera.vertical_fov > 0.0 && req.camera.vertical_fov < std::numbers::pi)) {
    throw BadRequest("camera.vertical_fov", "must lie in (0, pi)");
  }
  req.camera.width = positive_int(member(cam, "width", "camera.width"), "camera.width");
  req.camera.height = positive_int(member(cam, "height", "camera.height"), "camera.height");
  if (std::size_t(req.camera.width) * std::size_t(req.camera.height) > kMaxRequestPixels) {
    throw BadRequest("camera.width", "width * height exceeds " + std::to_string(kMaxRequestPixels));
  }
  if (const auto it = cam.find("near"); it != cam.end()) {
    req.camera.near = number(*it, "camera.near");
    if (!(req.camera.near > 0.0)) throw BadRequest("camera.near", "must be positive");
  }

  if (const auto it = doc.find("mode"); it != doc.end()) {
    if (!it->is_string()) throw BadRequest("mode", "must be a string");
    const auto mode = parse_render_mode(it->get<std::string>());
    if (!mode) throw BadRequest("mode", "must be one of unsliced, hard, modulated");
    req.mode = *mode;
  }
  if (const auto it = doc.find("k_sigma"); it != doc.end()) {
    req.k_sigma = number(*it, "k_sigma");
    if (!(req.k_sigma > 0.0)) throw BadRequest("k_sigma", "must be positive");
  }
  return req;
}

std::string render_request_json(const RenderRequest& r) {
  const auto& c = r.camera;
  json doc = {
      {"case_id", r.case_id},
      {"plane",
       {{"normal", {r.plane.normal().x(), r.plane.normal().y(), r.plane.normal().z()}},
        {"offset", r.plane.offset()}}},
      {"camera",
       {{"position", {c.position.x(), c.position.y(), c.position.z()}},
        {"orientation", {c.orientation.w(), c.orientation.x(), c.orientation.y(), c.orientation.z()}},
        {"vertical_fov", c.vertical_fov},
        {"width", c.width},
        {"height", c.height},
        {"near", c.near}}},
      {"mode", std::string(to_string(r.mode))},
      {"k_sigma", r.k_sigma},
  };
  return doc.dump();
}

CaseStore::CaseStore(fs::path dir) : dir_(std::move(dir)) {}

CaseListing CaseStore::list_cases() {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir_, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == kAssetExtension) {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  CaseListing listing;
  if (ec) listing.warnings.push_back(dir_.string() + ": " + ec.message());
  for (const auto& path : files) {
    const std::string id = path.stem().string();
    try {
      listing.cases.push_back(describe(id, *load(id)));
    } catch (const Error& e) {
      listing.warnings.push_back(path.filename().string() + ": " + e.what());
    }
  }
  return listing;
}

std::shared_ptr<const LayeredAsset> CaseStore::load(const std::string& case_id) {
  if (!valid_case_id(case_id)) throw NotFound("unknown case '" + case_id + "'");
  const fs::path path = dir_ / (case_id + kAssetExtension);

  std::promise<std::shared_ptr<const LayeredAsset>> promise;
  AssetFuture future;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = cache_.find(case_id);
    if (it != cache_.end()) {
      future = it->second;
    } else {
      if (!fs::is_regular_file(path)) throw NotFound("unknown case '" + case_id + "'");
      future = promise.get_future().share();
      cache_.emplace(case_id, future);
      owner = true;
    }
  }

  if (owner) {
    try {
      promise.set_value(std::make_shared<const LayeredAsset>(decode_asset(read_file(path))));
    } catch (...) {
      promise.set_exception(std::current_exception());
      // Failed loads are retried on the next request.
      std::lock_guard<std::mutex> lock(mu_);
      cache_.erase(case_id);
    }
  }
  return future.get();
}

RenderResult CaseStore::render(const RenderRequest& request) {
  const auto asset = load(request.case_id);
  const auto start = std::chrono::steady_clock::now();
  RenderOptions options;
  options.k_sigma = request.k_sigma;
  RenderStats stats;
  RenderResult result;
  result.frame = splatslice::render(*asset, request.plane, request.camera, request.mode, options, &stats);
  result.state_index = stats.state_index;
  result.render_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct ViewerServer::Impl {
  CaseStore& store;
  httplib::Server server;
  bool bound = false;

  explicit Impl(CaseStore& s) : store(s) {}

  static void send_error(httplib::Response& res, int status, const std::string& message,
                         const std::string& field = {}) {
    json body = {{"error", message}};
    if (!field.empty()) body["field"] = field;
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void install_routes() {
    // httplib also sets SO_REUSEPORT by default, which lets a second server
    // share a busy port instead of failing to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Expose-Headers",
                                 "X-Width, X-Height, X-State-Index, X-Render-Ms"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept");
      res.status = 204;
    });
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server.Get("/cases", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(case_listing_json(store.list_cases()), "application/json");
    });
    server.Post("/render", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const RenderRequest request = parse_render_request(req.body);
        const RenderResult result = store.render(request);
        res.set_header("X-State-Index", std::to_string(result.state_index));
        res.set_header("X-Render-Ms", std::to_string(result.render_ms));
        res.set_header("X-Width", std::to_string(result.frame.width));
        res.set_header("X-Height", std::to_string(result.frame.height));
        if (req.get_header_value("Accept").find("image/png") != std::string::npos) {
          res.set_content(encode_png(result.frame), "image/png");
        } else {
          res.set_content(
              std::string(reinterpret_cast<const char*>(result.frame.pixels.data()),
                          result.frame.pixels.size()),
              "application/octet-stream");
        }
      } catch (const BadRequest& e) {
        send_error(res, 400, e.what(), e.field());
      } catch (const NotFound& e) {
        send_error(res, 404, e.what());
      } catch (const InvalidArgument& e) {
        send_error(res, 400, e.what());
      } catch (const Error& e) {
        send_error(res, 500, e.what());
      }
    });
  }
};

ViewerServer::ViewerServer(CaseStore& store) : impl_(std::make_unique<Impl>(store)) {
  impl_->install_routes();
}

ViewerServer::~ViewerServer() { stop(); }

int ViewerServer::bind(const std::string& host, int port) {
  int bound_port = -1;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound_port = port;
  }
  if (bound_port < 0) {
    throw EnvironmentError("cannot bind " + host + ":" + std::to_string(port) +
                           " (address in use or not permitted)");
  }
  impl_->bound = true;
  return bound_port;
}

void ViewerServer::listen() {
  if (!impl_->bound) throw EnvironmentError("server is not bound");
  impl_->server.listen_after_bind();
}

void ViewerServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ViewerServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace splatslice
