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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "agrisynth/generator.hpp"
#include "agrisynth/imagery.hpp"
#include "agrisynth/maskops.hpp"

namespace agrisynth {

struct ComposeOptions {
  std::vector<PlantClass> classes = {PlantClass::kCrop, PlantClass::kWeed};
  ReplacementFilter filter;
  std::uint64_t seed = 42;
  // Abort on the first generator failure instead of keeping the original plant.
  bool strict = false;
};

struct ComposeResult {
  AnnotatedSample sample;
  std::size_t replaced_instances = 0;
  std::size_t replaced_area = 0;
  // One message per instance whose generation failed and was kept as-is.
  std::vector<std::string> skipped;
};

/// Seed handed to the generator for the `instance_index`-th candidate instance of a sample.
std::uint64_t instance_seed(const SeedPolicy& policy, std::uint64_t base_seed,
                            std::string_view sample_id, std::size_t instance_index);

/// Replaces every eligible instance of the selected classes with a generated patch.
/// Only pixels under each replaced footprint change; the mask is never modified.
ComposeResult compose_scene(const AnnotatedSample& sample, const PatchGenerator& generator,
                            const ComposeOptions& options);

struct MixSpec {
  std::size_t original_count = 0;
  std::size_t synthetic_count = 0;
  std::vector<PlantClass> synthetic_classes = {PlantClass::kCrop, PlantClass::kWeed};
  std::uint64_t seed = 42;
};

struct BuildOptions {
  std::string name = "dataset";
  ReplacementFilter filter;
  bool strict = false;
  unsigned jobs = 1;
  // Receives one message per skipped instance; may be called from worker threads.
  std::function<void(const std::string&)> on_skip;
};

/// Draws original_count + synthetic_count distinct entries from `source` (seeded, without
/// replacement); the first group is copied as real, the second is composed. Writes
/// `<out_dir>/{rgb,nir,mask}/<id>.png` and `<out_dir>/manifest.json`. Entries are sorted by id.
DatasetManifest build_dataset(const DatasetManifest& source, const MixSpec& spec,
                              const PatchGenerator& generator, const std::filesystem::path& out_dir,
                              const BuildOptions& options = {});

/// Composes every entry of `source` into `out_dir`.
DatasetManifest compose_dataset(const DatasetManifest& source, const PatchGenerator& generator,
                                const ComposeOptions& options, const std::filesystem::path& out_dir,
                                const BuildOptions& build = {});

}  // namespace agrisynth
