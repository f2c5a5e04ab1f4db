// Copyright 2026 The Bitsalvage Authors
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

#include "bitsalvage/common/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "bitsalvage/common/error.h"

namespace bitsalvage {
namespace {

std::string LowerExtension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Reads the next whitespace-delimited PNM header token, skipping comments.
int NextPnmInt(std::span<const uint8_t> bytes, size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  int value = 0;
  bool any = false;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    any = true;
    ++pos;
  }
  if (!any) throw Error(ErrorCode::kIo, "malformed PNM header");
  return value;
}

}  // namespace

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

ImageBuffer ReadPng(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(ErrorCode::kIo, "cannot read PNG " + path.string() + ": " +
                                    png.message);
  }
  const bool gray = (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
  png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<uint8_t> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw Error(ErrorCode::kIo, "cannot decode PNG " + path.string());
  }
  ImageBuffer image(static_cast<int>(png.width), static_cast<int>(png.height),
                    gray ? 1 : 3);
  std::copy(pixels.begin(), pixels.end(), image.samples().begin());
  return image;
}

void WritePng(const std::filesystem::path& path, const ImageBuffer& image) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = image.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<uint8_t> pixels(image.samples().size());
  std::transform(image.samples().begin(), image.samples().end(),
                 pixels.begin(),
                 [](int32_t s) { return static_cast<uint8_t>(ClampSample(s)); });
  if (!png_image_write_to_file(&png, path.c_str(), 0, pixels.data(), 0,
                               nullptr)) {
    throw Error(ErrorCode::kIo, "cannot write PNG " + path.string());
  }
}

ImageBuffer DecodePnm(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw Error(ErrorCode::kIo, "only binary P5/P6 PNM is supported");
  }
  const int channels = bytes[1] == '6' ? 3 : 1;
  size_t pos = 2;
  const int width = NextPnmInt(bytes, pos);
  const int height = NextPnmInt(bytes, pos);
  const int maxval = NextPnmInt(bytes, pos);
  if (maxval != 255) throw Error(ErrorCode::kIo, "PNM maxval must be 255");
  ++pos;  // single whitespace after maxval
  const size_t need = static_cast<size_t>(width) * height * channels;
  if (bytes.size() < pos + need) throw Error(ErrorCode::kIo, "truncated PNM");
  ImageBuffer image(width, height, channels);
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
            bytes.begin() + static_cast<std::ptrdiff_t>(pos + need),
            image.samples().begin());
  return image;
}

ImageBuffer ReadPnm(const std::filesystem::path& path) {
  return DecodePnm(ReadFileBytes(path));
}

void WritePnm(const std::filesystem::path& path, const ImageBuffer& image) {
  const std::string header = std::string(image.channels() == 3 ? "P6" : "P5") +
                             "\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<uint8_t> bytes(header.begin(), header.end());
  for (int32_t s : image.samples()) {
    bytes.push_back(static_cast<uint8_t>(ClampSample(s)));
  }
  WriteFileBytes(path, bytes);
}

bool IsSupportedImagePath(const std::filesystem::path& path) {
  const std::string ext = LowerExtension(path);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

ImageBuffer ReadImage(const std::filesystem::path& path) {
  const std::string ext = LowerExtension(path);
  if (ext == ".png") return ReadPng(path);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return ReadPnm(path);
  throw Error(ErrorCode::kIo, "unsupported raster format: " + path.string());
}

void WriteImage(const std::filesystem::path& path, const ImageBuffer& image) {
  const std::string ext = LowerExtension(path);
  if (ext == ".png") return WritePng(path, image);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
    return WritePnm(path, image);
  }
  throw Error(ErrorCode::kIo, "unsupported raster format: " + path.string());
}

}  // namespace bitsalvage
