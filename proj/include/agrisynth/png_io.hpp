// Copyright 2026 The AgriSynth Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "agrisynth/plane.hpp"

namespace agrisynth::png {

struct Header {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int bit_depth = 0;
  int color_type = 0;  // PNG IHDR color type: 0 gray, 2 rgb, 3 palette, 4 gray+alpha, 6 rgba
};

// Interleaved 8-bit pixels.
struct RawImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

/// Parses the signature and IHDR chunk only.
Header read_header(const std::filesystem::path& path);

/// Reads an 8-bit PNG that must have exactly `channels` samples per pixel (1 = gray,
/// 3 = RGB). No gamma or palette transforms are applied, so stored bytes come back as-is.
RawImage read(const std::filesystem::path& path, int channels);

void write(const std::filesystem::path& path, const RawImage& image);

Plane8 read_gray(const std::filesystem::path& path);
void write_gray(const std::filesystem::path& path, const Plane8& plane);

}  // namespace agrisynth::png
