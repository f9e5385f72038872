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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrisynth/plane.hpp"

namespace agrisynth {

enum class Channel : std::uint8_t { kRed = 0, kGreen = 1, kBlue = 2, kNir = 3 };

inline constexpr std::array<Channel, 4> kAllChannels = {Channel::kRed, Channel::kGreen,
                                                        Channel::kBlue, Channel::kNir};

/// Registered R,G,B,NIR raster. All four planes share the same dimensions, both >= 1.
class MultiSpectralImage {
 public:
  MultiSpectralImage(std::uint32_t width, std::uint32_t height);
  MultiSpectralImage(Plane8 red, Plane8 green, Plane8 blue, Plane8 nir);

  std::uint32_t width() const { return planes_[0].width(); }
  std::uint32_t height() const { return planes_[0].height(); }

  const Plane8& channel(Channel c) const { return planes_[static_cast<std::size_t>(c)]; }
  Plane8& channel(Channel c) { return planes_[static_cast<std::size_t>(c)]; }

  bool operator==(const MultiSpectralImage&) const = default;

 private:
  std::array<Plane8, 4> planes_;
};

enum class Label : std::uint8_t { kSoil = 0, kCrop = 1, kWeed = 2 };
inline constexpr int kNumLabels = 3;

enum class PlantClass : std::uint8_t { kCrop = 1, kWeed = 2 };

inline constexpr Label to_label(PlantClass c) { return static_cast<Label>(c); }
std::string_view to_string(PlantClass c);
PlantClass parse_plant_class(std::string_view name);

/// Per-pixel {soil, crop, weed} annotation. Construction rejects any other value.
class LabelMask {
 public:
  LabelMask(std::uint32_t width, std::uint32_t height);
  explicit LabelMask(Plane8 labels);

  std::uint32_t width() const { return labels_.width(); }
  std::uint32_t height() const { return labels_.height(); }

  Label at(std::uint32_t x, std::uint32_t y) const { return static_cast<Label>(labels_(x, y)); }
  void set(std::uint32_t x, std::uint32_t y, Label l) { labels_(x, y) = static_cast<std::uint8_t>(l); }

  const Plane8& raw() const { return labels_; }

  bool operator==(const LabelMask&) const = default;

 private:
  Plane8 labels_;
};

enum class Provenance : std::uint8_t { kReal, kSemiArtificial };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

struct AnnotatedSample {
  AnnotatedSample(MultiSpectralImage image, LabelMask mask, std::string id,
                  Provenance provenance = Provenance::kReal);

  MultiSpectralImage image;
  LabelMask mask;
  std::string id;
  Provenance provenance;

  bool operator==(const AnnotatedSample&) const = default;
};

struct SamplePaths {
  std::filesystem::path rgb;
  std::filesystem::path nir;
  std::filesystem::path mask;
};

/// Loads an 8-bit RGB PNG, an 8-bit grayscale NIR PNG and an 8-bit grayscale label PNG.
/// The id defaults to the mask file stem. Throws DataError naming the file and the
/// offending property.
AnnotatedSample load_sample(const std::filesystem::path& rgb_path,
                            const std::filesystem::path& nir_path,
                            const std::filesystem::path& mask_path,
                            std::optional<std::string> id = std::nullopt);

/// Writes `<out_dir>/{rgb,nir,mask}/<id>.png`. Throws IoError.
SamplePaths save_sample(const AnnotatedSample& sample, const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Dataset manifests

struct ManifestEntry {
  std::string id;
  std::filesystem::path rgb;
  std::filesystem::path nir;
  std::filesystem::path mask;
  Provenance provenance = Provenance::kReal;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;
  std::optional<std::array<std::uint64_t, kNumLabels>> class_counts;
  // Directory that relative entry paths are resolved against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  AnnotatedSample load(const ManifestEntry& entry) const;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const DatasetManifest& manifest);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

enum class IssueKind { kDuplicateId, kMissingFile, kUnreadableFile, kDimensionMismatch };

std::string_view to_string(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string id;
  std::string detail;
};

/// Empty iff the manifest is valid. Only PNG headers are read.
std::vector<ValidationIssue> validate_manifest(const DatasetManifest& manifest);

}  // namespace agrisynth
