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

#include "splatslice/ply.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "splatslice/errors.h"

namespace splatslice {
namespace {

enum class ScalarType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<ScalarType> scalar_type_from_name(std::string_view name) {
  static const std::unordered_map<std::string_view, ScalarType> kTypes = {
      {"char", ScalarType::kInt8},     {"int8", ScalarType::kInt8},
      {"uchar", ScalarType::kUint8},   {"uint8", ScalarType::kUint8},
      {"short", ScalarType::kInt16},   {"int16", ScalarType::kInt16},
      {"ushort", ScalarType::kUint16}, {"uint16", ScalarType::kUint16},
      {"int", ScalarType::kInt32},     {"int32", ScalarType::kInt32},
      {"uint", ScalarType::kUint32},   {"uint32", ScalarType::kUint32},
      {"float", ScalarType::kFloat32}, {"float32", ScalarType::kFloat32},
      {"double", ScalarType::kFloat64}, {"float64", ScalarType::kFloat64},
  };
  const auto it = kTypes.find(name);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUint8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUint16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUint32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double read_scalar(const char* p, ScalarType t) {
  switch (t) {
    case ScalarType::kInt8: return load_le<std::int8_t>(p);
    case ScalarType::kUint8: return load_le<std::uint8_t>(p);
    case ScalarType::kInt16: return load_le<std::int16_t>(p);
    case ScalarType::kUint16: return load_le<std::uint16_t>(p);
    case ScalarType::kInt32: return load_le<std::int32_t>(p);
    case ScalarType::kUint32: return load_le<std::uint32_t>(p);
    case ScalarType::kFloat32: return load_le<float>(p);
    case ScalarType::kFloat64: return load_le<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::kFloat32;
  bool is_list = false;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyFormat format = PlyFormat::kBinaryLittleEndian;
  std::vector<Element> elements;
  std::size_t data_offset = 0;  // first byte after end_header
  std::size_t line_count = 0;   // header lines, for ASCII line numbers
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::size_t> parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Header parse_header(std::string_view bytes) {
  Header header;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_format = false;

  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= bytes.size()) return std::nullopt;
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) return std::nullopt;
    std::string_view line = bytes.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    return line;
  };

  const auto magic = next_line();
  if (!magic || *magic != "ply") {
    throw ParseError(1, "missing 'ply' magic line");
  }

  while (true) {
    const auto line = next_line();
    if (!line) throw ParseError(line_no + 1, "unexpected end of header");
    const auto tok = split_ws(*line);
    if (tok.empty()) continue;

    if (tok[0] == "end_header") {
      if (!saw_format) throw ParseError(line_no, "end_header before format line");
      break;
    } else if (tok[0] == "comment" || tok[0] == "obj_info") {
      continue;
    } else if (tok[0] == "format") {
      if (tok.size() != 3) throw ParseError(line_no, "malformed format line");
      if (tok[1] == "binary_little_endian") {
        header.format = PlyFormat::kBinaryLittleEndian;
      } else if (tok[1] == "ascii") {
        header.format = PlyFormat::kAscii;
      } else {
        throw ParseError(line_no, "unsupported format '" + std::string(tok[1]) + "'");
      }
      saw_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError(line_no, "malformed element line");
      const auto count = parse_count(tok[2]);
      if (!count) throw ParseError(line_no, "bad element count '" + std::string(tok[2]) + "'");
      header.elements.push_back({std::string(tok[1]), *count, {}});
    } else if (tok[0] == "property") {
      if (header.elements.empty()) throw ParseError(line_no, "property before any element");
      Property prop;
      if (tok.size() == 5 && tok[1] == "list") {
        if (!scalar_type_from_name(tok[2]) || !scalar_type_from_name(tok[3])) {
          throw ParseError(line_no, "unknown list property type");
        }
        prop.is_list = true;
        prop.name = std::string(tok[4]);
      } else if (tok.size() == 3) {
        const auto type = scalar_type_from_name(tok[1]);
        if (!type) throw ParseError(line_no, "unknown property type '" + std::string(tok[1]) + "'");
        prop.type = *type;
        prop.name = std::string(tok[2]);
      } else {
        throw ParseError(line_no, "malformed property line");
      }
      header.elements.back().properties.push_back(std::move(prop));
    } else {
      throw ParseError(line_no, "unknown header keyword '" + std::string(tok[0]) + "'");
    }
  }

  header.data_offset = pos;
  header.line_count = line_no;
  return header;
}

// Column indices of the 3DGS attributes inside the vertex element.
struct VertexLayout {
  std::array<std::size_t, 3> position;
  std::array<std::size_t, 3> scale;
  std::array<std::size_t, 4> rotation;
  std::size_t opacity;
  std::array<std::size_t, 3> dc;
  std::vector<std::size_t> rest;
  int sh_degree = 0;
};

VertexLayout resolve_layout(const Element& vertex) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
    const auto& p = vertex.properties[i];
    if (p.is_list) {
      throw SchemaError(p.name, "list property '" + p.name + "' is not allowed in the vertex element");
    }
    index.emplace(p.name, i);
  }
  auto require = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw SchemaError(name);
    return it->second;
  };

  VertexLayout layout;
  layout.position = {require("x"), require("y"), require("z")};
  layout.scale = {require("scale_0"), require("scale_1"), require("scale_2")};
  layout.rotation = {require("rot_0"), require("rot_1"), require("rot_2"), require("rot_3")};
  layout.opacity = require("opacity");
  layout.dc = {require("f_dc_0"), require("f_dc_1"), require("f_dc_2")};

  for (std::size_t i = 0;; ++i) {
    const auto it = index.find("f_rest_" + std::to_string(i));
    if (it == index.end()) break;
    layout.rest.push_back(it->second);
  }
  switch (layout.rest.size()) {
    case 0: layout.sh_degree = 0; break;
    case 9: layout.sh_degree = 1; break;
    case 24: layout.sh_degree = 2; break;
    case 45: layout.sh_degree = 3; break;
    default:
      throw SchemaError("f_rest_" + std::to_string(layout.rest.size()),
                        "f_rest_* count " + std::to_string(layout.rest.size()) +
                            " does not match any SH degree (expected 0, 9, 24 or 45)");
  }
  return layout;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Builds a primitive from one row of raw property values.
void convert_vertex(std::size_t v, const std::vector<double>& row,
                    const VertexLayout& layout, GaussianCloud& cloud) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!std::isfinite(row[i])) {
      throw DataError(v, "non-finite attribute value");
    }
  }

  GaussianPrimitive prim;
  for (int a = 0; a < 3; ++a) {
    prim.position[a] = static_cast<float>(row[layout.position[a]]);
    prim.scale[a] = static_cast<float>(std::exp(row[layout.scale[a]]));
    prim.dc_color[a] = static_cast<float>(row[layout.dc[a]]);
  }
  if (!prim.scale.allFinite()) throw DataError(v, "scale overflows after exponentiation");

  Eigen::Vector4d q(row[layout.rotation[0]], row[layout.rotation[1]],
                    row[layout.rotation[2]], row[layout.rotation[3]]);
  const double qn = q.norm();
  if (!(qn > 0.0)) throw DataError(v, "zero-length rotation quaternion");
  q /= qn;
  prim.rotation = Eigen::Quaternionf(static_cast<float>(q[0]), static_cast<float>(q[1]),
                                     static_cast<float>(q[2]), static_cast<float>(q[3]));
  prim.opacity = static_cast<float>(logistic(row[layout.opacity]));

  if (layout.sh_degree > 0) {
    const std::size_t m = ShCoefficients::coeff_count(layout.sh_degree);
    ShCoefficients sh;
    sh.degree = layout.sh_degree;
    sh.coeffs.resize(m);
    // f_rest is channel-major: all R coefficients, then G, then B.
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < 3; ++c) {
        sh.coeffs[j][c] = static_cast<float>(row[layout.rest[c * m + j]]);
      }
    }
    prim.sh_index = static_cast<std::uint32_t>(cloud.sh_table.size());
    cloud.sh_table.push_back(std::move(sh));
  }
  cloud.primitives.push_back(prim);
}

}  // namespace

GaussianCloud parse_ply(std::string_view bytes, std::string source_name) {
  const Header header = parse_header(bytes);

  std::size_t vertex_idx = header.elements.size();
  for (std::size_t i = 0; i < header.elements.size(); ++i) {
    if (header.elements[i].name == "vertex") {
      vertex_idx = i;
      break;
    }
  }
  if (vertex_idx == header.elements.size()) throw SchemaError("vertex", "no 'vertex' element");

  const Element& vertex = header.elements[vertex_idx];
  const VertexLayout layout = resolve_layout(vertex);

  GaussianCloud cloud;
  cloud.source_name = std::move(source_name);
  cloud.primitives.reserve(vertex.count);
  if (layout.sh_degree > 0) cloud.sh_table.reserve(vertex.count);

  std::vector<double> row(vertex.properties.size());
  const std::string_view data = bytes.substr(header.data_offset);

  if (header.format == PlyFormat::kBinaryLittleEndian) {
    std::size_t skip = 0;
    for (std::size_t e = 0; e < vertex_idx; ++e) {
      std::size_t stride = 0;
      for (const auto& p : header.elements[e].properties) {
        if (p.is_list) {
          throw SchemaError(p.name, "list property in element '" + header.elements[e].name +
                                        "' preceding the vertex element is not supported");
        }
        stride += scalar_size(p.type);
      }
      skip += stride * header.elements[e].count;
    }

    std::vector<std::size_t> offsets(vertex.properties.size());
    std::size_t stride = 0;
    for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
      offsets[i] = stride;
      stride += scalar_size(vertex.properties[i].type);
    }
    if (skip > data.size()) throw DataError(0, "unexpected end of data before vertex element");
    const std::size_t available = (data.size() - skip) / std::max<std::size_t>(stride, 1);
    const char* base = data.data() + skip;
    for (std::size_t v = 0; v < vertex.count; ++v) {
      if (v >= available) throw DataError(v, "unexpected end of binary vertex data");
      const char* rec = base + v * stride;
      for (std::size_t i = 0; i < row.size(); ++i) {
        row[i] = read_scalar(rec + offsets[i], vertex.properties[i].type);
      }
      convert_vertex(v, row, layout, cloud);
    }
  } else {
    std::size_t pos = 0;
    std::size_t line_no = header.line_count;
    auto next_line = [&]() -> std::optional<std::string_view> {
      while (pos < data.size()) {
        std::size_t nl = data.find('\n', pos);
        if (nl == std::string_view::npos) nl = data.size();
        std::string_view line = data.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") != std::string_view::npos) return line;
      }
      return std::nullopt;
    };

    for (std::size_t e = 0; e < vertex_idx; ++e) {
      for (std::size_t i = 0; i < header.elements[e].count; ++i) {
        if (!next_line()) throw ParseError(line_no, "unexpected end of data");
      }
    }
    for (std::size_t v = 0; v < vertex.count; ++v) {
      const auto line = next_line();
      if (!line) throw ParseError(line_no, "expected " + std::to_string(vertex.count) +
                                               " vertices, found " + std::to_string(v));
      const auto tok = split_ws(*line);
      if (tok.size() != row.size()) {
        throw ParseError(line_no, "expected " + std::to_string(row.size()) + " values, found " +
                                      std::to_string(tok.size()));
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        const char* first = tok[i].data();
        const char* last = first + tok[i].size();
        const auto [ptr, ec] = std::from_chars(first, last, row[i]);
        if (ec != std::errc() || ptr != last) {
          // from_chars rejects "inf"/"nan" spellings some writers emit and
          // leaves out-of-range values unset; strtod handles both.
          const std::string s(tok[i]);
          char* end = nullptr;
          row[i] = std::strtod(s.c_str(), &end);
          if (end != s.c_str() + s.size()) {
            throw ParseError(line_no, "bad number '" + s + "'");
          }
        }
      }
      convert_vertex(v, row, layout, cloud);
    }
  }
  return cloud;
}

namespace {

constexpr double kOpacityEps = 1e-7;

double logit(double p) {
  p = std::clamp(p, kOpacityEps, 1.0 - kOpacityEps);
  return std::log(p / (1.0 - p));
}

}  // namespace

std::string write_ply(const GaussianCloud& cloud, PlyFormat format) {
  int degree = 0;
  for (const auto& p : cloud.primitives) {
    if (const auto* sh = cloud.sh_for(p)) degree = std::max(degree, sh->degree);
  }
  const std::size_t m = degree > 0 ? ShCoefficients::coeff_count(degree) : 0;
  const std::size_t columns = 3 + 3 + 3 + 3 * m + 1 + 3 + 4;

  std::ostringstream head;
  head << "ply\n"
       << (format == PlyFormat::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
       << "element vertex " << cloud.primitives.size() << "\n";
  for (const char* name : {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"}) {
    head << "property float " << name << "\n";
  }
  for (std::size_t i = 0; i < 3 * m; ++i) head << "property float f_rest_" << i << "\n";
  for (const char* name : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"}) {
    head << "property float " << name << "\n";
  }
  head << "end_header\n";

  std::string out = head.str();
  std::vector<float> row(columns);
  if (format == PlyFormat::kBinaryLittleEndian) {
    out.reserve(out.size() + cloud.primitives.size() * columns * sizeof(float));
  }

  for (const auto& p : cloud.primitives) {
    std::size_t k = 0;
    for (int a = 0; a < 3; ++a) row[k++] = p.position[a];
    for (int a = 0; a < 3; ++a) row[k++] = 0.0f;
    for (int a = 0; a < 3; ++a) row[k++] = p.dc_color[a];
    const ShCoefficients* sh = cloud.sh_for(p);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t j = 0; j < m; ++j) {
        row[k++] = (sh != nullptr && j < sh->coeffs.size()) ? sh->coeffs[j][c] : 0.0f;
      }
    }
    row[k++] = static_cast<float>(logit(p.opacity));
    for (int a = 0; a < 3; ++a) row[k++] = static_cast<float>(std::log(static_cast<double>(p.scale[a])));
    row[k++] = p.rotation.w();
    row[k++] = p.rotation.x();
    row[k++] = p.rotation.y();
    row[k++] = p.rotation.z();

    if (format == PlyFormat::kBinaryLittleEndian) {
      out.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    } else {
      char buf[32];
      for (std::size_t i = 0; i < row.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
        if (i > 0) out.push_back(' ');
        out.append(buf, res.ptr);
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::vector<Violation> validate_cloud(const GaussianCloud& cloud) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < cloud.primitives.size(); ++i) {
    const auto& p = cloud.primitives[i];
    if (!p.position.allFinite()) out.push_back({i, "position", "non-finite position"});
    if (!(p.scale.array() > 0.0f).all() || !p.scale.allFinite()) {
      out.push_back({i, "scale", "scale components must be finite and > 0"});
    }
    const double qn = p.rotation.cast<double>().norm();
    if (!(std::abs(qn - 1.0) <= 1e-6)) {
      out.push_back({i, "rotation", "quaternion norm " + std::to_string(qn) + " is not 1"});
    }
    if (!(p.opacity >= 0.0f && p.opacity <= 1.0f)) {
      out.push_back({i, "opacity", "opacity outside [0, 1]"});
    }
    if (!p.dc_color.allFinite()) out.push_back({i, "dc_color", "non-finite DC color"});
    if (p.has_sh() && p.sh_index >= cloud.sh_table.size()) {
      out.push_back({i, "sh_index",
                     "dangling reference " + std::to_string(p.sh_index) + " into a table of " +
                         std::to_string(cloud.sh_table.size())});
    }
  }
  for (std::size_t j = 0; j < cloud.sh_table.size(); ++j) {
    if (!cloud.sh_table[j].well_formed()) {
      out.push_back({j, "sh_table.coeffs", "coefficient count does not match degree"});
    }
  }
  return out;
}

}  // namespace splatslice
