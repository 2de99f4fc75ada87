// Copyright 2026 The Interplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "interplay/raster.hpp"

#include <png.h>

#include <cstring>
#include <set>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

struct PngReader {
  png_image image;

  explicit PngReader(const std::filesystem::path& path) {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
      throw ConfigError("cannot read PNG " + path.string() + ": " + image.message);
    }
  }
  ~PngReader() { png_image_free(&image); }

  std::vector<std::uint8_t> finish(const std::filesystem::path& path, png_uint_32 format) {
    image.format = format;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
      throw ConfigError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    return buffer;
  }
};

void write_buffer(const std::filesystem::path& path, int width, int height, png_uint_32 format,
                  const std::vector<std::uint8_t>& data) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, data.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw ConfigError("cannot write PNG " + path.string() + ": " + message);
  }
  png_image_free(&image);
}

}  // namespace

Image::Image(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c),
      pixels(static_cast<std::size_t>(w) * h * c, fill) {
  if (w < 0 || h < 0 || (c != 1 && c != 3 && c != 4)) {
    throw ShapeError("invalid image shape " + std::to_string(w) + "x" + std::to_string(h) + "x" +
                     std::to_string(c));
  }
}

Mask::Mask(int w, int h, std::uint8_t fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw ShapeError("invalid mask shape");
}

std::size_t Mask::count(std::uint8_t value) const {
  std::size_t n = 0;
  for (std::uint8_t v : values) n += (v == value);
  return n;
}

std::string to_string(const Rect& r) {
  return std::to_string(r.x) + " " + std::to_string(r.y) + " " + std::to_string(r.width) + " " +
         std::to_string(r.height);
}

Image read_png(const std::filesystem::path& path) {
  PngReader reader(path);
  const bool alpha = (reader.image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const png_uint_32 format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  Image out;
  out.width = static_cast<int>(reader.image.width);
  out.height = static_cast<int>(reader.image.height);
  out.channels = alpha ? 4 : 3;
  out.pixels = reader.finish(path, format);
  return out;
}

void write_png(const std::filesystem::path& path, const Image& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw ShapeError("image buffer does not match its shape");
  }
  const png_uint_32 format = image.channels == 1   ? PNG_FORMAT_GRAY
                             : image.channels == 3 ? PNG_FORMAT_RGB
                                                   : PNG_FORMAT_RGBA;
  write_buffer(path, image.width, image.height, format, image.pixels);
}

Mask read_mask_png(const std::filesystem::path& path) {
  PngReader reader(path);
  if ((reader.image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA)) != 0) {
    throw ConfigError("mask " + path.string() + " must be a single-channel PNG");
  }
  Mask out;
  out.width = static_cast<int>(reader.image.width);
  out.height = static_cast<int>(reader.image.height);
  out.values = reader.finish(path, PNG_FORMAT_GRAY);
  std::set<int> bad;
  for (std::uint8_t& v : out.values) {
    if (v == 255) {
      v = 1;
    } else if (v != 0) {
      bad.insert(v);
    }
  }
  if (!bad.empty()) {
    std::string list;
    for (int v : bad) list += (list.empty() ? "" : ", ") + std::to_string(v);
    throw ConfigError("mask " + path.string() + " is not binary {0, 255}; found " + list);
  }
  return out;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint8_t> data(mask.values.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (mask.values[i] > 1) throw ShapeError("mask values must be 0 or 1");
    data[i] = mask.values[i] ? 255 : 0;
  }
  write_buffer(path, mask.width, mask.height, PNG_FORMAT_GRAY, data);
}

Image resize_nearest(const Image& image, int width, int height) {
  if (width <= 0 || height <= 0) throw ShapeError("resize target must be positive");
  if (width == image.width && height == image.height) return image;
  Image out(width, height, image.channels);
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>((static_cast<long>(y) * image.height) / height);
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>((static_cast<long>(x) * image.width) / width);
      for (int c = 0; c < image.channels; ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

}  // namespace interplay
