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

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <stdexcept>
#include <vector>

#include "agrisynth/imagery.hpp"
#include "agrisynth/random.hpp"

namespace agrisynth::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "agrisynth") {
    std::string pattern = (std::filesystem::temp_directory_path() / (tag + "-XXXXXX")).string();
    if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline MultiSpectralImage random_image(std::uint32_t w, std::uint32_t h, Rng& rng) {
  MultiSpectralImage img(w, h);
  for (const Channel c : kAllChannels) {
    for (auto& v : img.channel(c).pixels()) v = static_cast<std::uint8_t>(rng.below(256));
  }
  return img;
}

inline LabelMask random_labels(std::uint32_t w, std::uint32_t h, Rng& rng) {
  LabelMask m(w, h);
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) m.set(x, y, static_cast<Label>(rng.below(kNumLabels)));
  }
  return m;
}

/// Soil background with a handful of elliptical crop and weed blobs, some touching the
/// border so that both eligible and ineligible instances occur.
inline LabelMask blob_labels(std::uint32_t w, std::uint32_t h, Rng& rng, int blobs = 8) {
  LabelMask m(w, h);
  for (int b = 0; b < blobs; ++b) {
    const Label l = rng.below(2) == 0 ? Label::kCrop : Label::kWeed;
    const double cx = rng.uniform() * w;
    const double cy = rng.uniform() * h;
    const double rx = 3.0 + rng.uniform() * w / 10.0;
    const double ry = 3.0 + rng.uniform() * h / 10.0;
    for (std::uint32_t y = 0; y < h; ++y) {
      for (std::uint32_t x = 0; x < w; ++x) {
        const double u = (x + 0.5 - cx) / rx;
        const double v = (y + 0.5 - cy) / ry;
        if (u * u + v * v <= 1.0) m.set(x, y, l);
      }
    }
  }
  return m;
}

inline AnnotatedSample blob_sample(std::uint32_t w, std::uint32_t h, std::uint64_t seed,
                                   const std::string& id) {
  Rng rng(seed);
  LabelMask mask = blob_labels(w, h, rng, 3 + static_cast<int>(rng.below(8)));
  MultiSpectralImage img = random_image(w, h, rng);
  return AnnotatedSample(std::move(img), std::move(mask), id);
}

/// Saves `count` blob samples under `dir` and writes `dir/manifest.json`.
inline DatasetManifest write_blob_dataset(const std::filesystem::path& dir, std::size_t count,
                                          std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
  DatasetManifest m;
  m.name = "blobs";
  m.base_dir = dir;
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "s%04zu", i);
    const AnnotatedSample s = blob_sample(w, h, mix_seed(seed, i), id);
    save_sample(s, dir);
    m.entries.push_back({id, std::filesystem::path("rgb") / (std::string(id) + ".png"),
                         std::filesystem::path("nir") / (std::string(id) + ".png"),
                         std::filesystem::path("mask") / (std::string(id) + ".png"),
                         Provenance::kReal});
  }
  write_manifest(m, dir / "manifest.json");
  return m;
}

/// Byte-level snapshot of every regular file under `dir`, keyed by relative path.
inline std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out.emplace_back(std::filesystem::relative(e.path(), dir).generic_string(), slurp(e.path()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace agrisynth::testing
