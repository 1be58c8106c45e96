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

#include "splatslice/image_io.h"

#include <cstring>

#include <png.h>

#include "splatslice/errors.h"
#include "splatslice/sequence.h"

namespace splatslice {

std::string encode_png(const FrameImage& image) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != std::size_t(image.width) * std::size_t(image.height) * 4) {
    throw InvalidArgument("frame buffer does not match its dimensions");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGBA;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + png.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + png.message);
  }
  out.resize(size);
  return out;
}

FrameImage decode_png(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG decode failed: ") + png.message);
  }
  png.format = PNG_FORMAT_RGBA;
  FrameImage image(static_cast<int>(png.width), static_cast<int>(png.height));
  if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw FormatError(std::string("PNG decode failed: ") + png.message);
  }
  return image;
}

void write_png(const std::filesystem::path& path, const FrameImage& image) {
  write_file(path, encode_png(image));
}

FrameImage read_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

}  // namespace splatslice
