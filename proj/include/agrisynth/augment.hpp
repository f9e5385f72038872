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
#include <string>
#include <variant>
#include <vector>

#include "agrisynth/imagery.hpp"

namespace agrisynth {

namespace aug {

// Geometric transforms: applied to all four channels and the mask.
struct Rotate90 {
  int k = 1;  // clockwise quarter turns, 1..3
};
struct FlipH {};
struct FlipV {};
struct Shift {
  int dx = 0;
  int dy = 0;
  // When set, the actual offsets are drawn uniformly from [-dx,dx] x [-dy,dy].
  bool randomize = false;
};
struct Zoom {
  double factor = 1.0;
};
struct Crop {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

// Photometric transforms: image channels only.
struct GaussianBlur {
  double sigma = 1.0;
};
struct MedianBlur {
  int radius = 1;
};
struct Noise {
  int amplitude = 0;  // uniform integer noise in [-amplitude, amplitude]
};
struct Contrast {
  double gain = 1.0;  // about mid-grey 128
};
struct Brightness {
  int offset = 0;
};

}  // namespace aug

using AugmentationKind =
    std::variant<aug::Rotate90, aug::FlipH, aug::FlipV, aug::Shift, aug::Zoom, aug::Crop,
                 aug::GaussianBlur, aug::MedianBlur, aug::Noise, aug::Contrast, aug::Brightness>;

struct AugmentationSpec {
  AugmentationKind kind;
  std::uint64_t seed = 0;
};

bool is_geometric(const AugmentationSpec& spec);

/// Throws DataError for out-of-range parameters.
void validate(const AugmentationSpec& spec);

/// One JSON object per augmentation, e.g. {"kind":"gaussian_blur","sigma":1.5,"seed":7}.
std::string to_json(const AugmentationSpec& spec);
AugmentationSpec augmentation_from_json(const std::string& text);
/// Accepts a single object or an array of objects.
std::vector<AugmentationSpec> augmentation_list_from_json(const std::string& text);

AnnotatedSample augment(const AnnotatedSample& sample, const AugmentationSpec& spec);

}  // namespace agrisynth
