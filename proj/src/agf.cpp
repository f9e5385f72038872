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

#include "agrisynth/agf.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "agrisynth/error.hpp"

namespace agrisynth::agf {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode(const Table& table) {
  if (table.values.size() != std::size_t{table.rows} * table.dims) {
    throw DataError("AGF1 table has " + std::to_string(table.values.size()) + " values, expected " +
                    std::to_string(std::size_t{table.rows} * table.dims));
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kHeaderSize + table.values.size() * 4);
  put_u16(out, kVersion);
  out.push_back(static_cast<std::uint8_t>(table.kind.value_or(Kind::kFeatures)));
  out.push_back(0);
  put_u32(out, table.rows);
  put_u32(out, table.dims);
  for (const float v : table.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Table decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DataError("not an AGF1 file (bad magic)");
  }
  const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kVersion) throw DataError("unsupported AGF1 version " + std::to_string(version));
  if (bytes[6] > 1) throw DataError("invalid AGF1 kind " + std::to_string(bytes[6]));
  if (bytes[7] != 0) throw DataError("AGF1 pad byte must be zero");

  Table t;
  t.kind = static_cast<Kind>(bytes[6]);
  t.rows = get_u32(bytes, 8);
  t.dims = get_u32(bytes, 12);
  const std::uint64_t count = std::uint64_t{t.rows} * t.dims;
  if (bytes.size() - kHeaderSize != count * 4) {
    throw DataError("AGF1 payload is " + std::to_string(bytes.size() - kHeaderSize) +
                    " bytes, header declares " + std::to_string(count * 4));
  }
  t.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    t.values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
  }
  return t;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV feature file is empty");
  const auto header = split_commas(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != "dim" + std::to_string(i)) {
      throw DataError("CSV header must be dim0,dim1,...; found '" + std::string(header[i]) + "'");
    }
  }

  Table t;
  t.dims = static_cast<std::uint32_t>(header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != t.dims) {
      throw DataError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " values, expected " + std::to_string(t.dims));
    }
    for (const auto cell : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError("CSV line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(cell) + "'");
      }
      t.values.push_back(static_cast<float>(v));
    }
    ++t.rows;
  }
  return t;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::uint32_t c = 0; c < table.dims; ++c) out << (c ? "," : "") << "dim" << c;
  out << "\n";
  char buf[32];
  for (std::uint32_t r = 0; r < table.rows; ++r) {
    for (std::uint32_t c = 0; c < table.dims; ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), table.at(r, c));
      out << (c ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << "\n";
  }
  return out.str();
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return decode(bytes);
    return parse_csv(std::string(bytes.begin(), bytes.end()));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write(const std::filesystem::path& path, const Table& table) {
  const auto bytes = encode(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace agrisynth::agf
