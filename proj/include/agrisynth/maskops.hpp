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
#include <vector>

#include "agrisynth/imagery.hpp"
#include "agrisynth/plane.hpp"

namespace agrisynth {

/// Half-open pixel rectangle [x0,x1) x [y0,y1) in source-image coordinates.
struct BoundingBox {
  std::uint32_t x0 = 0;
  std::uint32_t y0 = 0;
  std::uint32_t x1 = 0;
  std::uint32_t y1 = 0;

  std::uint32_t width() const { return x1 - x0; }
  std::uint32_t height() const { return y1 - y0; }
  bool operator==(const BoundingBox&) const = default;
};

/// One connected plant footprint. `footprint` has the size of `bbox` and `bbox` is tight.
struct InstanceMask {
  PlantClass plant_class = PlantClass::kCrop;
  BoundingBox bbox;
  BinaryMask footprint;
  std::size_t area = 0;
  bool eligible = false;
};

BinaryMask extract_class_mask(const LabelMask& mask, PlantClass plant_class);

/// 8-connected components of `binary`, ordered by the raster position of their first pixel.
/// `eligible` is left false; see mark_eligibility().
std::vector<InstanceMask> extract_instances(const BinaryMask& binary, PlantClass plant_class);

struct ReplacementFilter {
  // Width of the image border band that an eligible bbox must not touch.
  std::uint32_t margin = 5;
  // Fraction of the bbox extent, centered, that must contain the footprint centroid.
  double centrality = 0.5;
};

/// True when the instance bbox stays clear of the border band and the footprint
/// centroid sits in the central window of its bbox on both axes.
bool replacement_filter(const InstanceMask& instance, std::uint32_t image_width,
                        std::uint32_t image_height, const ReplacementFilter& filter = {});

void mark_eligibility(std::vector<InstanceMask>& instances, std::uint32_t image_width,
                      std::uint32_t image_height, const ReplacementFilter& filter = {});

std::size_t count_set(const BinaryMask& mask);

// Nearest-neighbour source index for destination index `d`, sampled at pixel centres.
inline std::uint32_t nearest_source_index(std::uint32_t d, std::uint32_t src, std::uint32_t dst) {
  return static_cast<std::uint32_t>((std::uint64_t{2} * d + 1) * src / (std::uint64_t{2} * dst));
}

/// Nearest-neighbour resampling; never invents values. Downscaling by an integer factor
/// after upscaling by that factor is the identity.
template <typename T>
Plane<T> resize_nearest(const Plane<T>& src, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) throw DataError("resize target dimension must be non-zero");
  if (src.empty()) throw DataError("cannot resize an empty raster");
  Plane<T> out(width, height);
  std::vector<std::uint32_t> xs(width);
  for (std::uint32_t x = 0; x < width; ++x) xs[x] = nearest_source_index(x, src.width(), width);
  for (std::uint32_t y = 0; y < height; ++y) {
    const auto sy = nearest_source_index(y, src.height(), height);
    const auto src_row = src.row(sy);
    auto dst_row = out.row(y);
    for (std::uint32_t x = 0; x < width; ++x) dst_row[x] = src_row[xs[x]];
  }
  return out;
}

inline BinaryMask resize_mask(const BinaryMask& footprint, std::uint32_t width,
                              std::uint32_t height) {
  return resize_nearest(footprint, width, height);
}

/// Centre-aligned bilinear resampling with edge clamping, rounded to nearest.
Plane8 resize_bilinear(const Plane8& src, std::uint32_t width, std::uint32_t height);

/// Maps values >= 0 to 1 and values < 0 to 0. Throws DataError on NaN.
BinaryMask threshold_signed_mask(const Plane<float>& signed_mask);

}  // namespace agrisynth
