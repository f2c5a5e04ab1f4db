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

#ifndef BITSALVAGE_COMMON_IMAGE_IO_H_
#define BITSALVAGE_COMMON_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bitsalvage/common/image.h"

namespace bitsalvage {

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

// PNG (via libpng) and binary PPM/PGM. Output rasters are always display
// domain; working-domain inputs are clamped on write.
ImageBuffer ReadPng(const std::filesystem::path& path);
void WritePng(const std::filesystem::path& path, const ImageBuffer& image);

ImageBuffer ReadPnm(const std::filesystem::path& path);
ImageBuffer DecodePnm(std::span<const uint8_t> bytes);
void WritePnm(const std::filesystem::path& path, const ImageBuffer& image);

// Dispatches on extension: .png, .ppm, .pgm, .pnm.
ImageBuffer ReadImage(const std::filesystem::path& path);
void WriteImage(const std::filesystem::path& path, const ImageBuffer& image);
bool IsSupportedImagePath(const std::filesystem::path& path);

}  // namespace bitsalvage

#endif  // BITSALVAGE_COMMON_IMAGE_IO_H_
