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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agrisynth/error.hpp"

namespace agrisynth {

/// Row-major single-channel raster.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(std::uint32_t width, std::uint32_t height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}
  Plane(std::uint32_t width, std::uint32_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw DataError("plane buffer size does not match " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
  }

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::uint32_t x, std::uint32_t y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(std::uint32_t x, std::uint32_t y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }
  std::span<T> row(std::uint32_t y) {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const T> row(std::uint32_t y) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  bool same_shape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Plane&) const = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<T> data_;
};

using Plane8 = Plane<std::uint8_t>;

// Binary raster with values in {0,1}.
using BinaryMask = Plane<std::uint8_t>;

}  // namespace agrisynth
