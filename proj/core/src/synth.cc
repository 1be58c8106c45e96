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

#include "splatslice/synth.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "splatslice/errors.h"

namespace splatslice {

namespace fs = std::filesystem;

namespace {

// Portable draws from a standardized engine; std distributions are not
// reproducible across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(tag)};
    engine_.seed(seq);
  }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t kSharedStream = ~std::uint64_t{0};
constexpr std::uint64_t kPrimitiveTag = 1;
constexpr std::uint64_t kShTag = 2;

ShCoefficients random_sh(Rng& rng, int degree) {
  ShCoefficients sh;
  sh.degree = degree;
  sh.coeffs.resize(ShCoefficients::coeff_count(degree));
  for (auto& c : sh.coeffs) {
    for (int a = 0; a < 3; ++a) c[a] = static_cast<float>(0.08 * rng.normal());
  }
  return sh;
}

GaussianPrimitive random_attributes(Rng& rng, double extent) {
  GaussianPrimitive p;
  for (int a = 0; a < 3; ++a) {
    p.scale[a] = static_cast<float>(extent * std::exp(rng.uniform(std::log(0.01), std::log(0.04))));
    p.dc_color[a] = static_cast<float>(0.6 * rng.normal());
  }
  Eigen::Vector4d q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  p.rotation = Eigen::Quaternionf(static_cast<float>(q[0]), static_cast<float>(q[1]),
                                  static_cast<float>(q[2]), static_cast<float>(q[3]));
  p.opacity = static_cast<float>(rng.uniform(0.2, 0.95));
  return p;
}

}  // namespace

void SynthParams::validate() const {
  if (states < 1) throw InvalidArgument("synthetic case needs at least one state");
  if (!(shared_fraction >= 0.0 && shared_fraction <= 1.0)) {
    throw InvalidArgument("shared fraction must lie in [0, 1]");
  }
  if (sh_degree < 0 || sh_degree > 3) throw InvalidArgument("SH degree must be 0..3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InvalidArgument("extent must be positive");
  if (!(axis.norm() > 0.0) || !axis.allFinite()) throw InvalidArgument("axis must be non-zero");
}

std::size_t SynthParams::shared_count() const {
  // The small slack keeps e.g. 0.95 * 10000 from rounding up to 9501.
  const double exact = shared_fraction * static_cast<double>(primitives);
  return std::min(primitives, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
}

SyntheticGenerator::SyntheticGenerator(const SynthParams& params) : params_(params) {
  params_.validate();
  axis_ = params_.axis.normalized();
  u_ = axis_.unitOrthogonal();
  v_ = axis_.cross(u_);

  const double e = params_.extent;
  offsets_.resize(params_.states);
  for (std::size_t k = 0; k < params_.states; ++k) {
    offsets_[k] = -e + (static_cast<double>(k) + 0.5) * 2.0 * e / static_cast<double>(params_.states);
  }

  Rng rng(params_.seed, kSharedStream, kPrimitiveTag);
  const std::size_t shared = params_.shared_count();
  shared_.reserve(shared);
  for (std::size_t i = 0; i < shared; ++i) {
    GaussianPrimitive p = random_attributes(rng, e);
    const Vec3d pos(rng.uniform(-e, e), rng.uniform(-e, e), rng.uniform(-e, e));
    p.position = pos.cast<float>();
    shared_.push_back(p);
  }
  if (params_.sh_degree > 0) {
    Rng sh_rng(params_.seed, kSharedStream, kShTag);
    slot_sh_.reserve(params_.primitives);
    for (std::size_t i = 0; i < params_.primitives; ++i) {
      slot_sh_.push_back(random_sh(sh_rng, params_.sh_degree));
    }
  }
}

GaussianCloud SyntheticGenerator::state(std::size_t k) const {
  if (k >= params_.states) throw IndexError("synthetic state " + std::to_string(k) + " out of range");
  const double e = params_.extent;
  const double slab = 2.0 * e / static_cast<double>(params_.states);

  GaussianCloud cloud;
  char name[32];
  std::snprintf(name, sizeof(name), "state %zu", k);
  cloud.source_name = name;
  cloud.primitives.reserve(params_.primitives);

  const bool with_sh = params_.sh_degree > 0;
  const bool fresh_sh = with_sh && params_.unique_sh;
  if (with_sh) cloud.sh_table.reserve(fresh_sh ? shared_.size() : params_.primitives);

  for (std::size_t i = 0; i < shared_.size(); ++i) {
    GaussianPrimitive p = shared_[i];
    if (with_sh) {
      p.sh_index = static_cast<std::uint32_t>(cloud.sh_table.size());
      cloud.sh_table.push_back(slot_sh_[i]);
    }
    cloud.primitives.push_back(p);
  }

  Rng rng(params_.seed, k, kPrimitiveTag);
  Rng sh_rng(params_.seed, k, kShTag);
  for (std::size_t i = shared_.size(); i < params_.primitives; ++i) {
    GaussianPrimitive p = random_attributes(rng, e);
    const Vec3d pos = rng.uniform(-e, e) * u_ + rng.uniform(-e, e) * v_ +
                      (offsets_[k] + 0.25 * slab * rng.normal()) * axis_;
    p.position = pos.cast<float>();
    if (with_sh) {
      p.sh_index = static_cast<std::uint32_t>(cloud.sh_table.size());
      cloud.sh_table.push_back(fresh_sh ? random_sh(sh_rng, params_.sh_degree) : slot_sh_[i]);
    }
    cloud.primitives.push_back(p);
  }
  return cloud;
}

StateSequence generate_synthetic(const SynthParams& params) {
  const SyntheticGenerator gen(params);
  std::vector<GaussianCloud> states;
  states.reserve(params.states);
  for (std::size_t k = 0; k < params.states; ++k) states.push_back(gen.state(k));
  return make_state_sequence(std::move(states), gen.offsets(), params.axis);
}

SynthOutput write_synthetic(const SynthParams& params, const fs::path& dir) {
  const SyntheticGenerator gen(params);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());

  const int digits = std::max<int>(3, static_cast<int>(std::to_string(params.states - 1).size()));
  SynthOutput out;
  Manifest manifest;
  manifest.axis = params.axis.normalized();
  for (std::size_t k = 0; k < params.states; ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "state_%0*zu.ply", digits, k);
    const fs::path path = dir / name;
    const std::string bytes = write_ply(gen.state(k));
    write_file(path, bytes);
    out.ply_bytes += bytes.size();
    manifest.states.push_back({path, gen.offsets()[k]});
  }
  out.manifest = dir / "manifest.json";
  write_file(out.manifest, manifest_to_json(manifest, dir));
  return out;
}

}  // namespace splatslice
