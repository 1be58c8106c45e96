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


// splatslice command-line tool: compile, render, compare, synth and serve.

#include <signal.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splatslice/asset_codec.h"
#include "splatslice/compiler.h"
#include "splatslice/errors.h"
#include "splatslice/image_io.h"
#include "splatslice/metrics.h"
#include "splatslice/renderer.h"
#include "splatslice/sequence.h"
#include "splatslice/service.h"
#include "splatslice/synth.h"

namespace fs = std::filesystem;
using namespace splatslice;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kMismatch = 3, kEnvironment = 4 };

// A flag value the library would reject; reported as a usage error.
class UsageError : public Error {
 public:
  using Error::Error;
};

template <int N>
Eigen::Matrix<double, N, 1> parse_tuple(const std::string& text, const std::string& flag) {
  Eigen::Matrix<double, N, 1> out;
  const char* p = text.data();
  const char* end = p + text.size();
  for (int i = 0; i < N; ++i) {
    while (p < end && *p == ' ') ++p;
    const auto [next, ec] = std::from_chars(p, end, out[i]);
    if (ec != std::errc() || !std::isfinite(out[i])) {
      throw UsageError(flag + ": expected " + std::to_string(N) + " comma-separated numbers");
    }
    p = next;
    while (p < end && *p == ' ') ++p;
    if (i + 1 < N) {
      if (p == end || *p != ',') {
        throw UsageError(flag + ": expected " + std::to_string(N) + " comma-separated numbers");
      }
      ++p;
    }
  }
  if (p != end) throw UsageError(flag + ": trailing characters in '" + text + "'");
  return out;
}

struct RenderArgs {
  std::string asset;
  std::string normal = "0,0,1";
  double offset = 0.0;
  std::string cam_pos;
  std::string cam_rot;
  std::string look_at;
  double fov = 0.8;
  int width = 256;
  int height = 256;
  double near = 0.01;
  std::string mode = "modulated";
  double k_sigma = kDefaultKSigma;
  std::string out;
};

// Camera three bounds-diagonals away from the centre, looking at it from the
// -y side and slightly above.
CameraPose default_camera(const Aabb& bounds, const RenderArgs& a) {
  const Vec3d center = bounds.center();
  const double radius = std::max(0.5 * (bounds.max - bounds.min).cast<double>().norm(), 1e-3);
  const double dist = radius / std::tan(0.5 * a.fov) * 1.1;
  const Vec3d dir = Vec3d(0.0, -1.0, 0.35).normalized();
  return CameraPose::look_at(center + dist * dir, center, a.fov, a.width, a.height);
}

CameraPose build_camera(const RenderArgs& a, const LayeredAsset& asset) {
  if (!a.cam_rot.empty() && !a.look_at.empty()) {
    throw UsageError("--cam-rot and --look-at are mutually exclusive");
  }
  CameraPose camera;
  if (a.cam_pos.empty()) {
    if (!a.cam_rot.empty() || !a.look_at.empty()) {
      throw UsageError("--cam-rot and --look-at require --cam-pos");
    }
    camera = default_camera(asset.bounds, a);
  } else {
    const Vec3d pos = parse_tuple<3>(a.cam_pos, "--cam-pos");
    if (!a.cam_rot.empty()) {
      const Eigen::Vector4d q = parse_tuple<4>(a.cam_rot, "--cam-rot");
      if (q.norm() == 0.0) throw UsageError("--cam-rot: quaternion must be non-zero");
      camera.position = pos;
      // Same normalization as the service so both paths agree bit for bit.
      camera.orientation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized();
    } else {
      const Vec3d target =
          a.look_at.empty() ? asset.bounds.center() : parse_tuple<3>(a.look_at, "--look-at");
      if ((target - pos).norm() == 0.0) throw UsageError("--look-at: target equals --cam-pos");
      camera = CameraPose::look_at(pos, target, a.fov, a.width, a.height);
    }
  }
  camera.vertical_fov = a.fov;
  camera.width = a.width;
  camera.height = a.height;
  camera.near = a.near;
  try {
    camera.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return camera;
}

int cmd_render(const RenderArgs& a) {
  const Vec3d normal = parse_tuple<3>(a.normal, "--normal");
  if (normal.norm() == 0.0) throw UsageError("--normal: plane normal must be non-zero");
  const SlicingPlane plane(normal, a.offset);
  const auto mode = parse_render_mode(a.mode);
  if (!mode) throw UsageError("--mode: expected unsliced, hard or modulated");
  if (!(a.k_sigma > 0.0)) throw UsageError("--k-sigma: must be positive");

  const LayeredAsset asset = decode_asset(read_file(a.asset));
  const CameraPose camera = build_camera(a, asset);
  RenderOptions options;
  options.k_sigma = a.k_sigma;
  RenderStats stats;
  const FrameImage frame = render(asset, plane, camera, *mode, options, &stats);
  write_png(a.out, frame);
  std::cout << "state " << stats.state_index << ", " << stats.projected << " of " << stats.active
            << " splats drawn, wrote " << a.out << "\n";
  return kOk;
}

int cmd_compile(const std::string& manifest_path, const std::string& out_path) {
  const Manifest manifest = read_manifest(manifest_path);
  const CompileResult result = compile_manifest(manifest);
  const std::string bytes = encode_asset(result.asset);
  write_file(out_path, bytes);
  const auto& s = result.stats;
  const double ratio = s.input_bytes ? double(bytes.size()) / double(s.input_bytes) : 0.0;
  nlohmann::json report = {
      {"input_bytes", s.input_bytes},   {"output_bytes", bytes.size()},
      {"ratio", ratio},                 {"states", s.states},
      {"base_count", s.base_count},     {"delta_total", s.delta_total},
      {"sh_count", s.sh_count},
  };
  std::cout << report.dump(2) << "\n";
  return kOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b) {
  const FrameImage a = read_png(path_a);
  const FrameImage b = read_png(path_b);
  if (a.width != b.width || a.height != b.height) {
    std::cerr << "error: image sizes differ (" << a.width << "x" << a.height << " vs " << b.width
              << "x" << b.height << ")\n";
    return kMismatch;
  }
  const MetricReport r = compare_images(a, b);
  std::cout << nlohmann::json{{"psnr_db", r.psnr_db}, {"ssim", r.ssim}}.dump() << "\n";
  return kOk;
}

int cmd_synth(SynthParams params, const std::string& out_dir) {
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const SynthOutput out = write_synthetic(params, out_dir);
  std::cout << "wrote " << params.states << " states (" << out.ply_bytes << " PLY bytes), manifest "
            << out.manifest.string() << "\n";
  return kOk;
}

int cmd_serve(const std::string& dir, const std::string& host, int port) {
  if (!fs::is_directory(dir)) throw UsageError("--dir: not a directory: " + dir);

  // Route SIGINT and SIGTERM to a waiter thread so shutdown runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  CaseStore store(dir);
  ViewerServer server(store);
  const int bound = server.bind(host, port);
  std::cout << "serving " << dir << " on http://" << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() can also return on its own; wake the waiter in that case.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile, render and serve sliced Gaussian-splat volumes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "splatslice 0.1.0");

  std::string manifest_path, asset_out;
  auto* compile = app.add_subcommand("compile", "Compile a state manifest into a layered asset");
  compile->add_option("manifest", manifest_path, "Manifest JSON")->required();
  compile->add_option("-o,--out", asset_out, "Output asset")->required();

  RenderArgs ra;
  auto* render_cmd = app.add_subcommand("render", "Render one frame of an asset to PNG");
  render_cmd->add_option("asset", ra.asset, "Compiled asset")->required();
  render_cmd->add_option("--normal", ra.normal, "Plane normal x,y,z")->capture_default_str();
  render_cmd->add_option("--offset", ra.offset, "Plane offset c (keeps p.n > c)")
      ->capture_default_str();
  render_cmd->add_option("--cam-pos", ra.cam_pos, "Camera position x,y,z");
  render_cmd->add_option("--cam-rot", ra.cam_rot, "Camera-to-world quaternion w,x,y,z");
  render_cmd->add_option("--look-at", ra.look_at, "Point the camera at x,y,z");
  render_cmd->add_option("--fov", ra.fov, "Vertical field of view in radians")
      ->capture_default_str();
  render_cmd->add_option("--width", ra.width, "Image width")->capture_default_str();
  render_cmd->add_option("--height", ra.height, "Image height")->capture_default_str();
  render_cmd->add_option("--near", ra.near, "Near clip distance")->capture_default_str();
  render_cmd->add_option("--mode", ra.mode, "unsliced, hard or modulated")->capture_default_str();
  render_cmd->add_option("--k-sigma", ra.k_sigma, "Sigma multiple of the soft band")
      ->capture_default_str();
  render_cmd->add_option("-o,--out", ra.out, "Output PNG")->required();

  std::string image_a, image_b;
  auto* compare = app.add_subcommand("compare", "Print PSNR and SSIM of two PNGs as JSON");
  compare->add_option("a", image_a, "First PNG")->required();
  compare->add_option("b", image_b, "Second PNG")->required();

  SynthParams sp;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic state sequence");
  synth->add_option("--states", sp.states, "Number of states K")->capture_default_str();
  synth->add_option("--primitives", sp.primitives, "Primitives per state N")
      ->capture_default_str();
  synth->add_option("--shared", sp.shared_fraction, "Fraction shared by all states")
      ->capture_default_str();
  synth->add_option("--seed", sp.seed, "Random seed")->capture_default_str();
  synth->add_option("--sh-degree", sp.sh_degree, "SH degree, 0 to 3")->capture_default_str();
  synth->add_flag("--unique-sh", sp.unique_sh, "Fresh SH payloads for per-state primitives");
  synth->add_option("-o,--out", synth_out, "Output directory")->required();

  std::string serve_dir, serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a directory of assets over HTTP");
  serve->add_option("--dir", serve_dir, "Directory of .cgsa assets")->required();
  serve->add_option("--port", serve_port, "Port, 0 picks a free one")->capture_default_str();
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*compile) return cmd_compile(manifest_path, asset_out);
    if (*render_cmd) return cmd_render(ra);
    if (*compare) return cmd_compare(image_a, image_b);
    if (*synth) return cmd_synth(sp, synth_out);
    if (*serve) return cmd_serve(serve_dir, serve_host, serve_port);
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
