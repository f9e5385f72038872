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

#include "agrisynth/compose.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "agrisynth/parallel.hpp"
#include "agrisynth/random.hpp"

namespace agrisynth {

namespace fs = std::filesystem;

std::uint64_t instance_seed(const SeedPolicy& policy, std::uint64_t base_seed,
                            std::string_view sample_id, std::size_t instance_index) {
  if (policy.mode == SeedPolicy::Mode::kFixed) return policy.fixed_seed;
  return mix_seed(mix_seed(base_seed, fnv1a64(sample_id)), instance_index);
}

ComposeResult compose_scene(const AnnotatedSample& sample, const PatchGenerator& generator,
                            const ComposeOptions& options) {
  ComposeResult result{sample, 0, 0, {}};
  result.sample.provenance = Provenance::kSemiArtificial;
  auto& out = result.sample.image;
  const std::uint32_t w = sample.image.width();
  const std::uint32_t h = sample.image.height();

  std::size_t instance_index = 0;
  for (const PlantClass cls : options.classes) {
    auto instances = extract_instances(extract_class_mask(sample.mask, cls), cls);
    mark_eligibility(instances, w, h, options.filter);
    const std::uint32_t side = generator.endpoint().patch_size.for_class(cls);

    for (std::size_t k = 0; k < instances.size(); ++k, ++instance_index) {
      const auto& inst = instances[k];
      if (!inst.eligible) continue;

      const std::uint64_t seed =
          instance_seed(generator.endpoint().seed_policy, options.seed, sample.id, instance_index);
      std::optional<GeneratedPatch> patch;
      try {
        patch = generate_patch(generator, resize_mask(inst.footprint, side, side), cls, seed);
      } catch (const GeneratorError& e) {
        const std::string what = sample.id + "/" + std::string(to_string(cls)) + "#" +
                                 std::to_string(k) + ": " + e.what();
        if (options.strict) throw GeneratorError(what);
        result.skipped.push_back(what);
        continue;
      }

      const auto& box = inst.bbox;
      for (const Channel c : kAllChannels) {
        const Plane8 scaled = resize_bilinear(patch->image.channel(c), box.width(), box.height());
        Plane8& dst = out.channel(c);
        for (std::uint32_t y = 0; y < box.height(); ++y) {
          for (std::uint32_t x = 0; x < box.width(); ++x) {
            if (inst.footprint(x, y)) dst(box.x0 + x, box.y0 + y) = scaled(x, y);
          }
        }
      }
      ++result.replaced_instances;
      result.replaced_area += inst.area;
    }
  }
  return result;
}

namespace {

struct Job {
  std::size_t source_index;
  bool synthetic;
};

std::array<std::uint64_t, kNumLabels> label_counts(const LabelMask& mask) {
  std::array<std::uint64_t, kNumLabels> counts{};
  for (auto v : mask.raw().pixels()) ++counts[v];
  return counts;
}

DatasetManifest run_jobs(const DatasetManifest& source, const std::vector<Job>& jobs,
                         const PatchGenerator& generator, const ComposeOptions& compose,
                         const fs::path& out_dir, const BuildOptions& options) {
  std::vector<std::string> ids;
  for (const auto& job : jobs) ids.push_back(source.entries[job.source_index].id);
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw DataError("duplicate sample id '" + *dup + "'");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries(jobs.size());
  std::vector<std::array<std::uint64_t, kNumLabels>> counts(jobs.size());

  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const ManifestEntry& src = source.entries[jobs[i].source_index];
    AnnotatedSample sample = source.load(src);
    if (jobs[i].synthetic) {
      ComposeResult composed = compose_scene(sample, generator, compose);
      if (options.on_skip) {
        for (const auto& msg : composed.skipped) options.on_skip(msg);
      }
      sample = std::move(composed.sample);
    } else {
      sample.provenance = Provenance::kReal;
    }
    save_sample(sample, out_dir);
    counts[i] = label_counts(sample.mask);
    entries[i] = ManifestEntry{sample.id, fs::path("rgb") / (sample.id + ".png"),
                               fs::path("nir") / (sample.id + ".png"),
                               fs::path("mask") / (sample.id + ".png"), sample.provenance};
  });

  DatasetManifest out;
  out.name = options.name;
  out.base_dir = out_dir;
  out.entries = std::move(entries);
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  std::array<std::uint64_t, kNumLabels> totals{};
  for (const auto& c : counts) {
    for (int l = 0; l < kNumLabels; ++l) totals[l] += c[l];
  }
  out.class_counts = totals;
  write_manifest(out, out_dir / "manifest.json");
  return out;
}

}  // namespace

DatasetManifest build_dataset(const DatasetManifest& source, const MixSpec& spec,
                              const PatchGenerator& generator, const fs::path& out_dir,
                              const BuildOptions& options) {
  const std::size_t wanted = spec.original_count + spec.synthetic_count;
  if (wanted == 0) throw DataError("mix spec requests zero entries");
  if (source.entries.size() < wanted) {
    throw DataError("source manifest has " + std::to_string(source.entries.size()) +
                    " entries, mix spec needs " + std::to_string(wanted));
  }
  if (spec.synthetic_count > 0 && spec.synthetic_classes.empty()) {
    throw DataError("synthetic entries requested but no synthetic classes selected");
  }

  std::vector<std::size_t> order(source.entries.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(order);

  std::vector<Job> jobs;
  jobs.reserve(wanted);
  for (std::size_t i = 0; i < wanted; ++i) jobs.push_back({order[i], i >= spec.original_count});

  ComposeOptions compose;
  compose.classes = spec.synthetic_classes;
  compose.filter = options.filter;
  compose.seed = spec.seed;
  compose.strict = options.strict;
  return run_jobs(source, jobs, generator, compose, out_dir, options);
}

DatasetManifest compose_dataset(const DatasetManifest& source, const PatchGenerator& generator,
                                const ComposeOptions& options, const fs::path& out_dir,
                                const BuildOptions& build) {
  std::vector<Job> jobs;
  jobs.reserve(source.entries.size());
  for (std::size_t i = 0; i < source.entries.size(); ++i) jobs.push_back({i, true});
  return run_jobs(source, jobs, generator, options, out_dir, build);
}

}  // namespace agrisynth
