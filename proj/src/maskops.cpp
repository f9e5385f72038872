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

#include "agrisynth/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace agrisynth {
namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root so roots follow raster order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

BinaryMask extract_class_mask(const LabelMask& mask, PlantClass plant_class) {
  const auto target = static_cast<std::uint8_t>(to_label(plant_class));
  BinaryMask out(mask.width(), mask.height());
  const auto src = mask.raw().pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == target ? 1 : 0;
  return out;
}

std::vector<InstanceMask> extract_instances(const BinaryMask& binary, PlantClass plant_class) {
  const std::uint32_t w = binary.width();
  const std::uint32_t h = binary.height();
  DisjointSet sets(binary.size());

  // Forward half of the 8-neighbourhood: W, NW, N, NE.
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      if (!binary(x, y)) continue;
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (x > 0 && binary(x - 1, y)) sets.unite(idx, idx - 1);
      if (y > 0) {
        const std::size_t up = idx - w;
        if (binary(x, y - 1)) sets.unite(idx, up);
        if (x > 0 && binary(x - 1, y - 1)) sets.unite(idx, up - 1);
        if (x + 1 < w && binary(x + 1, y - 1)) sets.unite(idx, up + 1);
      }
    }
  }

  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> slot_of_root(binary.size(), kNone);
  std::vector<BoundingBox> boxes;
  std::vector<std::size_t> roots;
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      if (!binary(x, y)) continue;
      const std::size_t root = sets.find(static_cast<std::size_t>(y) * w + x);
      if (slot_of_root[root] == kNone) {
        slot_of_root[root] = boxes.size();
        boxes.push_back({x, y, x + 1, y + 1});
        roots.push_back(root);
      } else {
        auto& b = boxes[slot_of_root[root]];
        b.x0 = std::min(b.x0, x);
        b.x1 = std::max(b.x1, x + 1);
        b.y1 = y + 1;
      }
    }
  }

  std::vector<InstanceMask> instances(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    instances[i].plant_class = plant_class;
    instances[i].bbox = boxes[i];
    instances[i].footprint = BinaryMask(boxes[i].width(), boxes[i].height());
  }
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      if (!binary(x, y)) continue;
      auto& inst = instances[slot_of_root[sets.find(static_cast<std::size_t>(y) * w + x)]];
      inst.footprint(x - inst.bbox.x0, y - inst.bbox.y0) = 1;
      ++inst.area;
    }
  }
  return instances;
}

bool replacement_filter(const InstanceMask& instance, std::uint32_t image_width,
                        std::uint32_t image_height, const ReplacementFilter& filter) {
  const auto& b = instance.bbox;
  const std::uint64_t m = filter.margin;
  if (b.x0 < m || b.y0 < m || std::uint64_t{b.x1} + m > image_width ||
      std::uint64_t{b.y1} + m > image_height) {
    return false;
  }
  if (instance.area == 0) return false;

  // Centroid in bbox-relative units, using pixel centres.
  double sx = 0.0;
  double sy = 0.0;
  const auto& fp = instance.footprint;
  for (std::uint32_t y = 0; y < fp.height(); ++y) {
    for (std::uint32_t x = 0; x < fp.width(); ++x) {
      if (fp(x, y)) {
        sx += x + 0.5;
        sy += y + 0.5;
      }
    }
  }
  const double u = sx / static_cast<double>(instance.area) / fp.width();
  const double v = sy / static_cast<double>(instance.area) / fp.height();
  const double lo = 0.5 - filter.centrality / 2.0;
  const double hi = 0.5 + filter.centrality / 2.0;
  return u >= lo && u <= hi && v >= lo && v <= hi;
}

void mark_eligibility(std::vector<InstanceMask>& instances, std::uint32_t image_width,
                      std::uint32_t image_height, const ReplacementFilter& filter) {
  for (auto& inst : instances) {
    inst.eligible = replacement_filter(inst, image_width, image_height, filter);
  }
}

std::size_t count_set(const BinaryMask& mask) {
  const auto px = mask.pixels();
  return static_cast<std::size_t>(std::count_if(px.begin(), px.end(), [](auto v) { return v != 0; }));
}

Plane8 resize_bilinear(const Plane8& src, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) throw DataError("resize target dimension must be non-zero");
  if (src.empty()) throw DataError("cannot resize an empty raster");

  struct Tap {
    std::uint32_t i0;
    std::uint32_t i1;
    double frac;
  };
  auto taps = [](std::uint32_t dst, std::uint32_t n) {
    std::vector<Tap> out(dst);
    const double scale = static_cast<double>(n) / dst;
    for (std::uint32_t d = 0; d < dst; ++d) {
      const double s = std::clamp((d + 0.5) * scale - 0.5, 0.0, static_cast<double>(n - 1));
      const auto i0 = static_cast<std::uint32_t>(s);
      out[d] = {i0, std::min(i0 + 1, n - 1), s - i0};
    }
    return out;
  };
  const auto tx = taps(width, src.width());
  const auto ty = taps(height, src.height());

  Plane8 out(width, height);
  for (std::uint32_t y = 0; y < height; ++y) {
    const auto r0 = src.row(ty[y].i0);
    const auto r1 = src.row(ty[y].i1);
    const double fy = ty[y].frac;
    for (std::uint32_t x = 0; x < width; ++x) {
      const auto& t = tx[x];
      const double top = r0[t.i0] + (r0[t.i1] - r0[t.i0]) * t.frac;
      const double bottom = r1[t.i0] + (r1[t.i1] - r1[t.i0]) * t.frac;
      out(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(top + (bottom - top) * fy, 0.0, 255.0)));
    }
  }
  return out;
}

BinaryMask threshold_signed_mask(const Plane<float>& signed_mask) {
  BinaryMask out(signed_mask.width(), signed_mask.height());
  for (std::uint32_t y = 0; y < signed_mask.height(); ++y) {
    for (std::uint32_t x = 0; x < signed_mask.width(); ++x) {
      const float v = signed_mask(x, y);
      if (std::isnan(v)) {
        throw DataError("NaN in signed mask at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      }
      out(x, y) = v >= 0.0f ? 1 : 0;
    }
  }
  return out;
}

}  // namespace agrisynth
