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

#include "agrisynth/png_io.hpp"

#include <png.h>

#include <array>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "agrisynth/error.hpp"

namespace agrisynth::png {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ErrorSink {
  std::string message;
};

void on_error(png_structp png_ptr, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png_ptr));
  if (sink != nullptr) sink->message = msg;
  png_longjmp(png_ptr, 1);
}

void on_warning(png_structp, png_const_charp) {}

struct ReadHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadHandle() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct WriteHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteHandle() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

const char* describe_channels(int channels) {
  return channels == 1 ? "1-channel 8-bit grayscale" : "3-channel 8-bit RGB";
}

}  // namespace

Header read_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::array<unsigned char, 29> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != static_cast<std::streamsize>(buf.size()) || png_sig_cmp(buf.data(), 0, 8) != 0) {
    throw DataError(path.string() + ": not a PNG file");
  }
  if (std::string(reinterpret_cast<const char*>(buf.data() + 12), 4) != "IHDR") {
    throw DataError(path.string() + ": corrupt PNG (missing IHDR)");
  }
  Header h;
  h.width = be32(buf.data() + 16);
  h.height = be32(buf.data() + 20);
  h.bit_depth = buf[24];
  h.color_type = buf[25];
  return h;
}

RawImage read(const std::filesystem::path& path, int channels) {
  const Header header = read_header(path);
  const int expected_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  if (header.bit_depth != 8 || header.color_type != expected_type) {
    throw DataError(path.string() + ": expected " + describe_channels(channels) +
                    " PNG, found bit depth " + std::to_string(header.bit_depth) +
                    " color type " + std::to_string(header.color_type));
  }

  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError(path.string() + ": cannot open file");

  ErrorSink sink;
  ReadHandle h;
  h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_error, on_warning);
  if (h.png == nullptr) throw DataError(path.string() + ": libpng initialization failed");
  h.info = png_create_info_struct(h.png);
  if (h.info == nullptr) throw DataError(path.string() + ": libpng initialization failed");

  RawImage image;
  image.width = header.width;
  image.height = header.height;
  image.channels = channels;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(h.png))) {
    throw DataError(path.string() + ": corrupt PNG (" + sink.message + ")");
  }
  png_init_io(h.png, fp.get());
  png_read_info(h.png, h.info);
  png_set_interlace_handling(h.png);
  png_read_update_info(h.png, h.info);

  const std::size_t stride = static_cast<std::size_t>(image.width) * channels;
  if (png_get_rowbytes(h.png, h.info) != stride) {
    throw DataError(path.string() + ": unexpected PNG row layout");
  }
  image.data.resize(stride * image.height);
  rows.resize(image.height);
  for (std::uint32_t y = 0; y < image.height; ++y) rows[y] = image.data.data() + y * stride;
  png_read_image(h.png, rows.data());
  png_read_end(h.png, nullptr);
  return image;
}

void write(const std::filesystem::path& path, const RawImage& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw IoError(path.string() + ": only 1- or 3-channel images can be written");
  }
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  if (image.data.size() != stride * image.height || image.width == 0 || image.height == 0) {
    throw IoError(path.string() + ": image buffer does not match its dimensions");
  }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError(path.string() + ": cannot open for writing");

  ErrorSink sink;
  WriteHandle h;
  h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_error, on_warning);
  if (h.png == nullptr) throw IoError(path.string() + ": libpng initialization failed");
  h.info = png_create_info_struct(h.png);
  if (h.info == nullptr) throw IoError(path.string() + ": libpng initialization failed");

  std::vector<png_bytep> rows(image.height);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    rows[y] = const_cast<png_bytep>(image.data.data() + y * stride);
  }

  if (setjmp(png_jmpbuf(h.png))) {
    throw IoError(path.string() + ": write failed (" + sink.message + ")");
  }
  png_init_io(h.png, fp.get());
  png_set_IHDR(h.png, h.info, image.width, image.height, 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(h.png, h.info);
  png_write_image(h.png, rows.data());
  png_write_end(h.png, nullptr);

  if (std::fflush(fp.get()) != 0 || std::ferror(fp.get())) {
    throw IoError(path.string() + ": write failed");
  }
}

Plane8 read_gray(const std::filesystem::path& path) {
  RawImage raw = read(path, 1);
  return Plane8(raw.width, raw.height, std::move(raw.data));
}

void write_gray(const std::filesystem::path& path, const Plane8& plane) {
  RawImage raw{plane.width(), plane.height(), 1, {plane.pixels().begin(), plane.pixels().end()}};
  write(path, raw);
}

}  // namespace agrisynth::png
