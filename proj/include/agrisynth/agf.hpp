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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agrisynth::agf {

// Layout, all little-endian:
//   "AGF1" | version u16 = 1 | kind u8 | pad u8 = 0 | rows u32 | dims u32 | rows*dims f32 row-major
inline constexpr std::uint8_t kMagic[4] = {0x41, 0x47, 0x46, 0x31};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 16;

enum class Kind : std::uint8_t { kFeatures = 0, kProbabilities = 1 };

struct Table {
  // Unset for CSV input, which carries no kind.
  std::optional<Kind> kind;
  std::uint32_t rows = 0;
  std::uint32_t dims = 0;
  std::vector<float> values;  // row-major

  float at(std::uint32_t r, std::uint32_t c) const { return values[std::size_t{r} * dims + c]; }
};

std::vector<std::uint8_t> encode(const Table& table);
Table decode(std::span<const std::uint8_t> bytes);

/// CSV with a `dim0,dim1,...` header row.
Table parse_csv(const std::string& text);
std::string to_csv(const Table& table);

/// Reads AGF1, falling back to CSV when the magic bytes are absent. Throws DataError.
Table read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const Table& table);

}  // namespace agrisynth::agf
