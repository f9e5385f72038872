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

#include "agrisynth/imagery.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "agrisynth/png_io.hpp"

namespace agrisynth {

namespace fs = std::filesystem;
using nlohmann::json;

MultiSpectralImage::MultiSpectralImage(std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) throw DataError("image dimensions must be at least 1x1");
  for (auto& p : planes_) p = Plane8(width, height);
}

MultiSpectralImage::MultiSpectralImage(Plane8 red, Plane8 green, Plane8 blue, Plane8 nir)
    : planes_{std::move(red), std::move(green), std::move(blue), std::move(nir)} {
  if (width() == 0 || height() == 0) throw DataError("image dimensions must be at least 1x1");
  for (const auto& p : planes_) {
    if (!p.same_shape(planes_[0])) {
      throw DataError("channel dimension mismatch: " + std::to_string(p.width()) + "x" +
                      std::to_string(p.height()) + " vs " + std::to_string(width()) + "x" +
                      std::to_string(height()));
    }
  }
}

std::string_view to_string(PlantClass c) { return c == PlantClass::kCrop ? "crop" : "weed"; }

PlantClass parse_plant_class(std::string_view name) {
  if (name == "crop") return PlantClass::kCrop;
  if (name == "weed") return PlantClass::kWeed;
  throw DataError("unknown plant class '" + std::string(name) + "'");
}

LabelMask::LabelMask(std::uint32_t width, std::uint32_t height) : labels_(width, height, 0) {}

LabelMask::LabelMask(Plane8 labels) : labels_(std::move(labels)) {
  for (std::uint32_t y = 0; y < labels_.height(); ++y) {
    for (std::uint32_t x = 0; x < labels_.width(); ++x) {
      const auto v = labels_(x, y);
      if (v >= kNumLabels) {
        throw DataError("invalid label value " + std::to_string(v) + " at (" + std::to_string(x) +
                        "," + std::to_string(y) + ")");
      }
    }
  }
}

std::string_view to_string(Provenance p) {
  return p == Provenance::kReal ? "real" : "semi-artificial";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "real") return Provenance::kReal;
  if (name == "semi-artificial") return Provenance::kSemiArtificial;
  throw DataError("unknown provenance '" + std::string(name) + "'");
}

AnnotatedSample::AnnotatedSample(MultiSpectralImage image_in, LabelMask mask_in, std::string id_in,
                                 Provenance provenance_in)
    : image(std::move(image_in)),
      mask(std::move(mask_in)),
      id(std::move(id_in)),
      provenance(provenance_in) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw DataError("sample '" + id + "': image is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()) + " but mask is " + std::to_string(mask.width()) +
                    "x" + std::to_string(mask.height()));
  }
}

AnnotatedSample load_sample(const fs::path& rgb_path, const fs::path& nir_path,
                            const fs::path& mask_path, std::optional<std::string> id) {
  png::RawImage rgb = png::read(rgb_path, 3);
  Plane8 nir = png::read_gray(nir_path);
  Plane8 labels = png::read_gray(mask_path);

  if (nir.width() != rgb.width || nir.height() != rgb.height) {
    throw DataError(nir_path.string() + ": dimension mismatch, NIR is " +
                    std::to_string(nir.width()) + "x" + std::to_string(nir.height()) +
                    " but RGB is " + std::to_string(rgb.width) + "x" + std::to_string(rgb.height));
  }
  if (labels.width() != rgb.width || labels.height() != rgb.height) {
    throw DataError(mask_path.string() + ": dimension mismatch, mask is " +
                    std::to_string(labels.width()) + "x" + std::to_string(labels.height()) +
                    " but RGB is " + std::to_string(rgb.width) + "x" + std::to_string(rgb.height));
  }

  std::array<Plane8, 3> colour{Plane8(rgb.width, rgb.height), Plane8(rgb.width, rgb.height),
                               Plane8(rgb.width, rgb.height)};
  const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) colour[c].pixels()[i] = rgb.data[i * 3 + c];
  }

  std::optional<LabelMask> mask;
  try {
    mask.emplace(std::move(labels));
  } catch (const DataError& e) {
    throw DataError(mask_path.string() + ": " + e.what());
  }

  MultiSpectralImage image(std::move(colour[0]), std::move(colour[1]), std::move(colour[2]),
                           std::move(nir));
  return AnnotatedSample(std::move(image), std::move(*mask),
                         id ? std::move(*id) : mask_path.stem().string(), Provenance::kReal);
}

SamplePaths save_sample(const AnnotatedSample& sample, const fs::path& out_dir) {
  SamplePaths paths{out_dir / "rgb" / (sample.id + ".png"), out_dir / "nir" / (sample.id + ".png"),
                    out_dir / "mask" / (sample.id + ".png")};
  for (const auto* p : {&paths.rgb, &paths.nir, &paths.mask}) {
    std::error_code ec;
    fs::create_directories(p->parent_path(), ec);
    if (ec) throw IoError(p->parent_path().string() + ": " + ec.message());
  }

  const auto& img = sample.image;
  png::RawImage rgb{img.width(), img.height(), 3, {}};
  rgb.data.resize(static_cast<std::size_t>(img.width()) * img.height() * 3);
  const auto r = img.channel(Channel::kRed).pixels();
  const auto g = img.channel(Channel::kGreen).pixels();
  const auto b = img.channel(Channel::kBlue).pixels();
  for (std::size_t i = 0; i < r.size(); ++i) {
    rgb.data[i * 3] = r[i];
    rgb.data[i * 3 + 1] = g[i];
    rgb.data[i * 3 + 2] = b[i];
  }
  png::write(paths.rgb, rgb);
  png::write_gray(paths.nir, img.channel(Channel::kNir));
  png::write_gray(paths.mask, sample.mask.raw());
  return paths;
}

// ---------------------------------------------------------------------------

fs::path DatasetManifest::resolve(const fs::path& p) const {
  return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

AnnotatedSample DatasetManifest::load(const ManifestEntry& entry) const {
  AnnotatedSample s = load_sample(resolve(entry.rgb), resolve(entry.nir), resolve(entry.mask), entry.id);
  s.provenance = entry.provenance;
  return s;
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open manifest");
  DatasetManifest m;
  try {
    const json j = json::parse(in);
    m.name = j.at("name").get<std::string>();
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.rgb = e.at("rgb").get<std::string>();
      entry.nir = e.at("nir").get<std::string>();
      entry.mask = e.at("mask").get<std::string>();
      entry.provenance = parse_provenance(e.value("provenance", std::string("real")));
      m.entries.push_back(std::move(entry));
    }
    if (j.contains("class_counts")) {
      m.class_counts = j.at("class_counts").get<std::array<std::uint64_t, kNumLabels>>();
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed manifest (" + e.what() + ")");
  }
  m.base_dir = path.parent_path();
  return m;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json j;
  j["name"] = manifest.name;
  j["entries"] = json::array();
  for (const auto& e : manifest.entries) {
    j["entries"].push_back({{"id", e.id},
                            {"rgb", e.rgb.generic_string()},
                            {"nir", e.nir.generic_string()},
                            {"mask", e.mask.generic_string()},
                            {"provenance", std::string(to_string(e.provenance))}});
  }
  if (manifest.class_counts) j["class_counts"] = *manifest.class_counts;
  return j.dump(2) + "\n";
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << manifest_to_json(manifest);
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::kDuplicateId: return "duplicate id";
    case IssueKind::kMissingFile: return "missing file";
    case IssueKind::kUnreadableFile: return "unreadable file";
    case IssueKind::kDimensionMismatch: return "dimension mismatch";
  }
  return "unknown";
}

std::vector<ValidationIssue> validate_manifest(const DatasetManifest& manifest) {
  std::vector<ValidationIssue> issues;
  std::set<std::string> seen;
  for (const auto& entry : manifest.entries) {
    if (!seen.insert(entry.id).second) {
      issues.push_back({IssueKind::kDuplicateId, entry.id, "id appears more than once"});
    }

    std::array<std::optional<png::Header>, 3> headers;
    const std::array<const fs::path*, 3> files{&entry.rgb, &entry.nir, &entry.mask};
    for (std::size_t i = 0; i < files.size(); ++i) {
      const fs::path p = manifest.resolve(*files[i]);
      std::error_code ec;
      if (!fs::is_regular_file(p, ec)) {
        issues.push_back({IssueKind::kMissingFile, entry.id, p.string()});
        continue;
      }
      try {
        headers[i] = png::read_header(p);
      } catch (const DataError& e) {
        issues.push_back({IssueKind::kUnreadableFile, entry.id, e.what()});
      }
    }

    const auto& ref = headers[0] ? headers[0] : headers[1] ? headers[1] : headers[2];
    if (!ref) continue;
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (headers[i] && (headers[i]->width != ref->width || headers[i]->height != ref->height)) {
        std::ostringstream os;
        os << manifest.resolve(*files[i]).string() << " is " << headers[i]->width << "x"
           << headers[i]->height << ", expected " << ref->width << "x" << ref->height;
        issues.push_back({IssueKind::kDimensionMismatch, entry.id, os.str()});
      }
    }
  }
  return issues;
}

}  // namespace agrisynth
