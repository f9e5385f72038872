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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "agrisynth/imagery.hpp"
#include "agrisynth/plane.hpp"

namespace agrisynth {

/// Square generator input/output side length per class.
struct PatchSize {
  std::uint32_t crop = 512;
  std::uint32_t weed = 128;

  std::uint32_t for_class(PlantClass c) const { return c == PlantClass::kCrop ? crop : weed; }
};

enum class EndpointKind { kMock, kDirectory, kSubprocess };

EndpointKind parse_endpoint_kind(std::string_view name);

struct SeedPolicy {
  enum class Mode { kPerInstanceHash, kFixed };
  Mode mode = Mode::kPerInstanceHash;
  std::uint64_t fixed_seed = 0;
};

struct GeneratorEndpoint {
  EndpointKind kind = EndpointKind::kMock;
  // Patch-bank directory, or a shell command line for the subprocess kind.
  std::string location;
  PatchSize patch_size;
  SeedPolicy seed_policy;
  std::chrono::milliseconds timeout{std::chrono::minutes(2)};
};

struct GeneratedPatch {
  MultiSpectralImage image;
  BinaryMask conditioning_mask;
};

/// Produces an RGB+NIR patch conditioned on a plant footprint already resized to the
/// class patch size. Implementations are safe to call concurrently.
class PatchGenerator {
 public:
  explicit PatchGenerator(GeneratorEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  virtual ~PatchGenerator() = default;

  PatchGenerator(const PatchGenerator&) = delete;
  PatchGenerator& operator=(const PatchGenerator&) = delete;

  const GeneratorEndpoint& endpoint() const { return endpoint_; }

  virtual MultiSpectralImage generate(const BinaryMask& footprint, PlantClass plant_class,
                                      std::uint64_t seed) const = 0;

 private:
  GeneratorEndpoint endpoint_;
};

/// Checks the endpoint invariants (existing directory, executable command) and
/// instantiates it. Throws GeneratorError.
std::unique_ptr<PatchGenerator> open_generator(const GeneratorEndpoint& endpoint);

/// Runs the generator with size checks on both sides of the call.
GeneratedPatch generate_patch(const PatchGenerator& generator, const BinaryMask& footprint,
                              PlantClass plant_class, std::uint64_t seed);

/// 64-bit content hash over dimensions and pixels; keys the directory patch bank.
std::uint64_t footprint_hash(const BinaryMask& footprint);

/// `<dir>/<class>/<16 hex digits>.{rgb,nir}.png`
std::filesystem::path patch_bank_path(const std::filesystem::path& dir, PlantClass plant_class,
                                      std::uint64_t hash, std::string_view channel);

/// Stores `image` in a patch bank under the hash of `footprint`.
void store_patch(const std::filesystem::path& dir, const BinaryMask& footprint,
                 PlantClass plant_class, const MultiSpectralImage& image);

// Mock generator tones.
namespace mock {
inline constexpr std::uint8_t kSoil[4] = {110, 90, 70, 60};
inline constexpr std::uint8_t kCrop[4] = {60, 150, 50, 210};
inline constexpr std::uint8_t kWeed[4] = {100, 125, 40, 170};
inline constexpr int kNoise = 12;
}  // namespace mock

}  // namespace agrisynth
