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

#include "agrisynth/augment.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "agrisynth/maskops.hpp"
#include "agrisynth/random.hpp"

namespace agrisynth {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

template <typename T>
Plane<T> rotate_cw(const Plane<T>& src) {
  Plane<T> out(src.height(), src.width());
  for (std::uint32_t y = 0; y < src.height(); ++y) {
    for (std::uint32_t x = 0; x < src.width(); ++x) out(src.height() - 1 - y, x) = src(x, y);
  }
  return out;
}

template <typename T>
Plane<T> flip_h(const Plane<T>& src) {
  Plane<T> out(src.width(), src.height());
  for (std::uint32_t y = 0; y < src.height(); ++y) {
    for (std::uint32_t x = 0; x < src.width(); ++x) out(src.width() - 1 - x, y) = src(x, y);
  }
  return out;
}

template <typename T>
Plane<T> flip_v(const Plane<T>& src) {
  Plane<T> out(src.width(), src.height());
  for (std::uint32_t y = 0; y < src.height(); ++y) {
    std::copy(src.row(y).begin(), src.row(y).end(), out.row(src.height() - 1 - y).begin());
  }
  return out;
}

template <typename T>
Plane<T> shift(const Plane<T>& src, std::int64_t dx, std::int64_t dy) {
  Plane<T> out(src.width(), src.height());
  for (std::uint32_t y = 0; y < src.height(); ++y) {
    const std::int64_t sy = y - dy;
    if (sy < 0 || sy >= src.height()) continue;
    for (std::uint32_t x = 0; x < src.width(); ++x) {
      const std::int64_t sx = x - dx;
      if (sx < 0 || sx >= src.width()) continue;
      out(x, y) = src(static_cast<std::uint32_t>(sx), static_cast<std::uint32_t>(sy));
    }
  }
  return out;
}

template <typename T>
Plane<T> crop(const Plane<T>& src, const aug::Crop& c) {
  Plane<T> out(c.width, c.height);
  for (std::uint32_t y = 0; y < c.height; ++y) {
    const auto r = src.row(c.y + y).subspan(c.x, c.width);
    std::copy(r.begin(), r.end(), out.row(y).begin());
  }
  return out;
}

std::uint8_t saturate(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

Plane8 gaussian_blur(const Plane8& src, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (auto& k : kernel) k /= sum;

  const auto w = static_cast<std::int64_t>(src.width());
  const auto h = static_cast<std::int64_t>(src.height());
  std::vector<double> tmp(src.size());
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const auto sx = std::clamp<std::int64_t>(x + i, 0, w - 1);
        acc += kernel[i + radius] * src(static_cast<std::uint32_t>(sx), static_cast<std::uint32_t>(y));
      }
      tmp[y * w + x] = acc;
    }
  }
  Plane8 out(src.width(), src.height());
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const auto sy = std::clamp<std::int64_t>(y + i, 0, h - 1);
        acc += kernel[i + radius] * tmp[sy * w + x];
      }
      out(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)) = saturate(acc);
    }
  }
  return out;
}

Plane8 median_blur(const Plane8& src, int radius) {
  const auto w = static_cast<std::int64_t>(src.width());
  const auto h = static_cast<std::int64_t>(src.height());
  Plane8 out(src.width(), src.height());
  std::vector<std::uint8_t> window;
  window.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      window.clear();
      for (int dy = -radius; dy <= radius; ++dy) {
        const auto sy = static_cast<std::uint32_t>(std::clamp<std::int64_t>(y + dy, 0, h - 1));
        for (int dx = -radius; dx <= radius; ++dx) {
          const auto sx = static_cast<std::uint32_t>(std::clamp<std::int64_t>(x + dx, 0, w - 1));
          window.push_back(src(sx, sy));
        }
      }
      auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      out(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)) = *mid;
    }
  }
  return out;
}

template <typename Fn>
MultiSpectralImage map_channels(const MultiSpectralImage& img, Fn&& fn) {
  // Sequenced so stateful (seeded) functions see channels in R,G,B,NIR order.
  Plane8 r = fn(img.channel(Channel::kRed));
  Plane8 g = fn(img.channel(Channel::kGreen));
  Plane8 b = fn(img.channel(Channel::kBlue));
  Plane8 n = fn(img.channel(Channel::kNir));
  return MultiSpectralImage(std::move(r), std::move(g), std::move(b), std::move(n));
}

LabelMask map_mask(const LabelMask& mask, auto&& fn) { return LabelMask(fn(mask.raw())); }

template <typename Fn>
Plane8 map_pixels(const Plane8& src, Fn&& fn) {
  Plane8 out(src.width(), src.height());
  const auto in = src.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = fn(in[i]);
  return out;
}

std::string kind_name(const AugmentationKind& kind) {
  return std::visit(
      Overloaded{[](const aug::Rotate90&) { return "rotate90"; },
                 [](const aug::FlipH&) { return "flip_h"; },
                 [](const aug::FlipV&) { return "flip_v"; },
                 [](const aug::Shift&) { return "shift"; },
                 [](const aug::Zoom&) { return "zoom"; },
                 [](const aug::Crop&) { return "crop"; },
                 [](const aug::GaussianBlur&) { return "gaussian_blur"; },
                 [](const aug::MedianBlur&) { return "median_blur"; },
                 [](const aug::Noise&) { return "noise"; },
                 [](const aug::Contrast&) { return "contrast"; },
                 [](const aug::Brightness&) { return "brightness"; }},
      kind);
}

AugmentationSpec from_json_object(const json& j) {
  AugmentationSpec spec{aug::FlipH{}, j.value("seed", std::uint64_t{0})};
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "rotate90") {
    spec.kind = aug::Rotate90{j.value("k", 1)};
  } else if (kind == "flip_h") {
    spec.kind = aug::FlipH{};
  } else if (kind == "flip_v") {
    spec.kind = aug::FlipV{};
  } else if (kind == "shift") {
    spec.kind = aug::Shift{j.value("dx", 0), j.value("dy", 0), j.value("randomize", false)};
  } else if (kind == "zoom") {
    spec.kind = aug::Zoom{j.at("factor").get<double>()};
  } else if (kind == "crop") {
    spec.kind = aug::Crop{j.at("x").get<std::uint32_t>(), j.at("y").get<std::uint32_t>(),
                          j.at("width").get<std::uint32_t>(), j.at("height").get<std::uint32_t>()};
  } else if (kind == "gaussian_blur") {
    spec.kind = aug::GaussianBlur{j.at("sigma").get<double>()};
  } else if (kind == "median_blur") {
    spec.kind = aug::MedianBlur{j.at("radius").get<int>()};
  } else if (kind == "noise") {
    spec.kind = aug::Noise{j.at("amplitude").get<int>()};
  } else if (kind == "contrast") {
    spec.kind = aug::Contrast{j.at("gain").get<double>()};
  } else if (kind == "brightness") {
    spec.kind = aug::Brightness{j.at("offset").get<int>()};
  } else {
    throw DataError("unknown augmentation kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

}  // namespace

bool is_geometric(const AugmentationSpec& spec) {
  return std::holds_alternative<aug::Rotate90>(spec.kind) ||
         std::holds_alternative<aug::FlipH>(spec.kind) ||
         std::holds_alternative<aug::FlipV>(spec.kind) ||
         std::holds_alternative<aug::Shift>(spec.kind) ||
         std::holds_alternative<aug::Zoom>(spec.kind) || std::holds_alternative<aug::Crop>(spec.kind);
}

void validate(const AugmentationSpec& spec) {
  auto fail = [&](const std::string& what) {
    throw DataError(kind_name(spec.kind) + ": " + what);
  };
  std::visit(Overloaded{
                 [&](const aug::Rotate90& a) {
                   if (a.k < 1 || a.k > 3) fail("k must be 1, 2 or 3");
                 },
                 [&](const aug::Zoom& a) {
                   if (!(a.factor > 0.0) || !std::isfinite(a.factor) || a.factor > 16.0) {
                     fail("factor must be in (0, 16]");
                   }
                 },
                 [&](const aug::Crop& a) {
                   if (a.width == 0 || a.height == 0) fail("crop window must be non-empty");
                 },
                 [&](const aug::GaussianBlur& a) {
                   if (!(a.sigma > 0.0) || a.sigma > 64.0) fail("sigma must be in (0, 64]");
                 },
                 [&](const aug::MedianBlur& a) {
                   if (a.radius < 1 || a.radius > 32) fail("radius must be in [1, 32]");
                 },
                 [&](const aug::Noise& a) {
                   if (a.amplitude < 0 || a.amplitude > 255) fail("amplitude must be in [0, 255]");
                 },
                 [&](const aug::Contrast& a) {
                   if (!(a.gain >= 0.0) || a.gain > 16.0) fail("gain must be in [0, 16]");
                 },
                 [&](const aug::Brightness& a) {
                   if (a.offset < -255 || a.offset > 255) fail("offset must be in [-255, 255]");
                 },
                 [&](const aug::Shift& a) {
                   if (a.randomize && (a.dx < 0 || a.dy < 0)) {
                     fail("randomized shift bounds must be non-negative");
                   }
                 },
                 [](const auto&) {}},
             spec.kind);
}

std::string to_json(const AugmentationSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  std::visit(Overloaded{[&](const aug::Rotate90& a) { j["k"] = a.k; },
                        [&](const aug::Shift& a) {
                          j["dx"] = a.dx;
                          j["dy"] = a.dy;
                          j["randomize"] = a.randomize;
                        },
                        [&](const aug::Zoom& a) { j["factor"] = a.factor; },
                        [&](const aug::Crop& a) {
                          j["x"] = a.x;
                          j["y"] = a.y;
                          j["width"] = a.width;
                          j["height"] = a.height;
                        },
                        [&](const aug::GaussianBlur& a) { j["sigma"] = a.sigma; },
                        [&](const aug::MedianBlur& a) { j["radius"] = a.radius; },
                        [&](const aug::Noise& a) { j["amplitude"] = a.amplitude; },
                        [&](const aug::Contrast& a) { j["gain"] = a.gain; },
                        [&](const aug::Brightness& a) { j["offset"] = a.offset; },
                        [](const auto&) {}},
             spec.kind);
  j["seed"] = spec.seed;
  return j.dump();
}

AugmentationSpec augmentation_from_json(const std::string& text) {
  try {
    return from_json_object(json::parse(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed augmentation spec: ") + e.what());
  }
}

std::vector<AugmentationSpec> augmentation_list_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    std::vector<AugmentationSpec> out;
    if (j.is_array()) {
      for (const auto& item : j) out.push_back(from_json_object(item));
    } else {
      out.push_back(from_json_object(j));
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed augmentation spec: ") + e.what());
  }
}

AnnotatedSample augment(const AnnotatedSample& sample, const AugmentationSpec& spec) {
  validate(spec);
  const auto& img = sample.image;
  auto geometric = [&](auto&& fn) {
    return AnnotatedSample(map_channels(img, fn), map_mask(sample.mask, fn), sample.id,
                           sample.provenance);
  };
  auto photometric = [&](auto&& fn) {
    return AnnotatedSample(map_channels(img, fn), sample.mask, sample.id, sample.provenance);
  };

  return std::visit(
      Overloaded{
          [&](const aug::Rotate90& a) {
            return geometric([&](const auto& p) {
              auto out = rotate_cw(p);
              for (int i = 1; i < a.k; ++i) out = rotate_cw(out);
              return out;
            });
          },
          [&](const aug::FlipH&) { return geometric([](const auto& p) { return flip_h(p); }); },
          [&](const aug::FlipV&) { return geometric([](const auto& p) { return flip_v(p); }); },
          [&](const aug::Shift& a) {
            std::int64_t dx = a.dx;
            std::int64_t dy = a.dy;
            if (a.randomize) {
              Rng rng(spec.seed);
              dx = rng.between(-a.dx, a.dx);
              dy = rng.between(-a.dy, a.dy);
            }
            return geometric([&](const auto& p) { return shift(p, dx, dy); });
          },
          [&](const aug::Zoom& a) {
            const double w = std::round(img.width() * a.factor);
            const double h = std::round(img.height() * a.factor);
            if (w < 1.0 || h < 1.0) throw DataError("zoom: output would be smaller than one pixel");
            const auto ow = static_cast<std::uint32_t>(w);
            const auto oh = static_cast<std::uint32_t>(h);
            return AnnotatedSample(
                map_channels(img, [&](const Plane8& p) { return resize_bilinear(p, ow, oh); }),
                LabelMask(resize_nearest(sample.mask.raw(), ow, oh)), sample.id, sample.provenance);
          },
          [&](const aug::Crop& a) {
            if (std::uint64_t{a.x} + a.width > img.width() ||
                std::uint64_t{a.y} + a.height > img.height()) {
              throw DataError("crop: window outside image bounds");
            }
            return geometric([&](const auto& p) { return crop(p, a); });
          },
          [&](const aug::GaussianBlur& a) {
            return photometric([&](const Plane8& p) { return gaussian_blur(p, a.sigma); });
          },
          [&](const aug::MedianBlur& a) {
            return photometric([&](const Plane8& p) { return median_blur(p, a.radius); });
          },
          [&](const aug::Noise& a) {
            Rng rng(spec.seed);
            return photometric([&](const Plane8& p) {
              return map_pixels(p, [&](std::uint8_t v) {
                return saturate(static_cast<double>(v) + rng.between(-a.amplitude, a.amplitude));
              });
            });
          },
          [&](const aug::Contrast& a) {
            return photometric([&](const Plane8& p) {
              return map_pixels(p, [&](std::uint8_t v) { return saturate((v - 128.0) * a.gain + 128.0); });
            });
          },
          [&](const aug::Brightness& a) {
            return photometric([&](const Plane8& p) {
              return map_pixels(p, [&](std::uint8_t v) { return saturate(static_cast<double>(v) + a.offset); });
            });
          }},
      spec.kind);
}

}  // namespace agrisynth
