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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "splatslice/renderer.h"

namespace splatslice {

// RGBA8 PNG encoding. Output bytes depend only on the pixels.
std::string encode_png(const FrameImage& image);

// Decodes any PNG libpng understands, converted to RGBA8. Throws FormatError.
FrameImage decode_png(std::string_view bytes);

void write_png(const std::filesystem::path& path, const FrameImage& image);
FrameImage read_png(const std::filesystem::path& path);

}  // namespace splatslice
