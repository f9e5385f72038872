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

#include "agrisynth/generator.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>
#include <vector>

#include "agrisynth/error.hpp"
#include "agrisynth/png_io.hpp"
#include "agrisynth/random.hpp"

extern char** environ;

namespace agrisynth {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = kDigits[v & 0xf];
  return s;
}

MultiSpectralImage load_patch(const fs::path& rgb_path, const fs::path& nir_path) {
  png::RawImage rgb = png::read(rgb_path, 3);
  Plane8 nir = png::read_gray(nir_path);
  if (nir.width() != rgb.width || nir.height() != rgb.height) {
    throw DataError(nir_path.string() + ": NIR patch size differs from RGB patch");
  }
  Plane8 r(rgb.width, rgb.height), g(rgb.width, rgb.height), b(rgb.width, rgb.height);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.pixels()[i] = rgb.data[i * 3];
    g.pixels()[i] = rgb.data[i * 3 + 1];
    b.pixels()[i] = rgb.data[i * 3 + 2];
  }
  return MultiSpectralImage(std::move(r), std::move(g), std::move(b), std::move(nir));
}

void save_patch(const fs::path& rgb_path, const fs::path& nir_path, const MultiSpectralImage& img) {
  png::RawImage rgb{img.width(), img.height(), 3, {}};
  rgb.data.resize(static_cast<std::size_t>(img.width()) * img.height() * 3);
  for (std::size_t i = 0; i < img.channel(Channel::kRed).size(); ++i) {
    rgb.data[i * 3] = img.channel(Channel::kRed).pixels()[i];
    rgb.data[i * 3 + 1] = img.channel(Channel::kGreen).pixels()[i];
    rgb.data[i * 3 + 2] = img.channel(Channel::kBlue).pixels()[i];
  }
  png::write(rgb_path, rgb);
  png::write_gray(nir_path, img.channel(Channel::kNir));
}

// ---------------------------------------------------------------------------

class MockGenerator final : public PatchGenerator {
 public:
  using PatchGenerator::PatchGenerator;

  MultiSpectralImage generate(const BinaryMask& footprint, PlantClass plant_class,
                              std::uint64_t seed) const override {
    const auto* tone = plant_class == PlantClass::kCrop ? mock::kCrop : mock::kWeed;
    const std::uint64_t key =
        mix_seed(mix_seed(seed, footprint_hash(footprint)), static_cast<std::uint64_t>(plant_class));
    MultiSpectralImage out(footprint.width(), footprint.height());
    for (int c = 0; c < 4; ++c) {
      auto dst = out.channel(kAllChannels[c]).pixels();
      const auto fp = footprint.pixels();
      const std::uint64_t channel_key = mix_seed(key, static_cast<std::uint64_t>(c));
      for (std::size_t i = 0; i < dst.size(); ++i) {
        if (fp[i]) {
          const auto noise = static_cast<int>(splitmix64(channel_key + i) % (2 * mock::kNoise + 1)) -
                             mock::kNoise;
          dst[i] = static_cast<std::uint8_t>(tone[c] + noise);
        } else {
          dst[i] = mock::kSoil[c];
        }
      }
    }
    return out;
  }
};

class DirectoryGenerator final : public PatchGenerator {
 public:
  using PatchGenerator::PatchGenerator;

  MultiSpectralImage generate(const BinaryMask& footprint, PlantClass plant_class,
                              std::uint64_t /*seed*/) const override {
    const std::uint64_t hash = footprint_hash(footprint);
    const fs::path rgb = patch_bank_path(endpoint().location, plant_class, hash, "rgb");
    const fs::path nir = patch_bank_path(endpoint().location, plant_class, hash, "nir");
    std::error_code ec;
    if (!fs::is_regular_file(rgb, ec) || !fs::is_regular_file(nir, ec)) {
      throw GeneratorError("patch bank miss: no " + std::string(to_string(plant_class)) +
                           " patch for footprint hash " + hex64(hash) + " in " + endpoint().location);
    }
    try {
      return load_patch(rgb, nir);
    } catch (const DataError& e) {
      throw GeneratorError(std::string("patch bank entry unreadable: ") + e.what());
    }
  }
};

// Removes a scratch directory on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "agrisynth-gen-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw GeneratorError(std::string("cannot create scratch directory: ") + std::strerror(errno));
    }
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string first_token(const std::string& command) {
  std::istringstream in(command);
  std::string token;
  in >> token;
  return token;
}

bool is_executable_command(const std::string& command) {
  const std::string prog = first_token(command);
  if (prog.empty()) return false;
  if (prog.find('/') != std::string::npos) return ::access(prog.c_str(), X_OK) == 0;
  const char* path_env = std::getenv("PATH");
  std::istringstream dirs(path_env ? path_env : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    const fs::path candidate = fs::path(dir.empty() ? "." : dir) / prog;
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

class SubprocessGenerator final : public PatchGenerator {
 public:
  using PatchGenerator::PatchGenerator;

  MultiSpectralImage generate(const BinaryMask& footprint, PlantClass plant_class,
                              std::uint64_t seed) const override {
    ScratchDir scratch;
    const fs::path mask_path = scratch.path() / "mask.png";
    const fs::path rgb_path = scratch.path() / "rgb.png";
    const fs::path nir_path = scratch.path() / "nir.png";
    png::write_gray(mask_path, footprint);

    // The command line goes through the shell; our arguments are appended verbatim.
    const std::string script = endpoint().location + " \"$@\"";
    const std::string seed_text = std::to_string(seed);
    std::vector<std::string> args = {"/bin/sh",       "-c",
                                     script,          "agrisynth-generator",
                                     "--mask",        mask_path.string(),
                                     "--class",       std::string(to_string(plant_class)),
                                     "--seed",        seed_text,
                                     "--out-rgb",     rgb_path.string(),
                                     "--out-nir",     nir_path.string()};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    // Keep our stdout clean for machine-readable output.
    posix_spawn_file_actions_adddup2(&actions, STDERR_FILENO, STDOUT_FILENO);
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    pid_t pid = 0;
    const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0) {
      throw GeneratorError("cannot start generator '" + endpoint().location + "': " + std::strerror(rc));
    }

    const auto deadline = std::chrono::steady_clock::now() + endpoint().timeout;
    int status = 0;
    for (;;) {
      const pid_t done = ::waitpid(pid, &status, WNOHANG);
      if (done == pid) break;
      if (done < 0 && errno != EINTR) {
        throw GeneratorError(std::string("waitpid failed: ") + std::strerror(errno));
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        throw GeneratorError("generator timed out after " +
                             std::to_string(endpoint().timeout.count()) + " ms");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      const std::string how = WIFEXITED(status)
                                  ? "exited with status " + std::to_string(WEXITSTATUS(status))
                                  : "was killed by a signal";
      throw GeneratorError("generator '" + endpoint().location + "' " + how);
    }
    try {
      return load_patch(rgb_path, nir_path);
    } catch (const DataError& e) {
      throw GeneratorError(std::string("generator produced malformed output: ") + e.what());
    }
  }
};

}  // namespace

EndpointKind parse_endpoint_kind(std::string_view name) {
  if (name == "mock") return EndpointKind::kMock;
  if (name == "directory") return EndpointKind::kDirectory;
  if (name == "subprocess") return EndpointKind::kSubprocess;
  throw DataError("unknown generator kind '" + std::string(name) + "'");
}

std::unique_ptr<PatchGenerator> open_generator(const GeneratorEndpoint& endpoint) {
  if (endpoint.patch_size.crop == 0 || endpoint.patch_size.weed == 0) {
    throw GeneratorError("patch sizes must be non-zero");
  }
  switch (endpoint.kind) {
    case EndpointKind::kMock:
      return std::make_unique<MockGenerator>(endpoint);
    case EndpointKind::kDirectory: {
      std::error_code ec;
      if (!fs::is_directory(endpoint.location, ec)) {
        throw GeneratorError("patch bank directory does not exist: " + endpoint.location);
      }
      return std::make_unique<DirectoryGenerator>(endpoint);
    }
    case EndpointKind::kSubprocess:
      if (!is_executable_command(endpoint.location)) {
        throw GeneratorError("generator command is not executable: '" + endpoint.location + "'");
      }
      return std::make_unique<SubprocessGenerator>(endpoint);
  }
  throw GeneratorError("unknown endpoint kind");
}

GeneratedPatch generate_patch(const PatchGenerator& generator, const BinaryMask& footprint,
                              PlantClass plant_class, std::uint64_t seed) {
  const std::uint32_t side = generator.endpoint().patch_size.for_class(plant_class);
  if (footprint.width() != side || footprint.height() != side) {
    throw DataError("footprint must be resized to " + std::to_string(side) + "x" +
                    std::to_string(side) + " before generation");
  }
  MultiSpectralImage image = generator.generate(footprint, plant_class, seed);
  if (image.width() != side || image.height() != side) {
    throw GeneratorError("generator returned a " + std::to_string(image.width()) + "x" +
                         std::to_string(image.height()) + " patch, expected " +
                         std::to_string(side) + "x" + std::to_string(side));
  }
  return GeneratedPatch{std::move(image), footprint};
}

std::uint64_t footprint_hash(const BinaryMask& footprint) {
  std::uint8_t dims[8];
  for (int i = 0; i < 4; ++i) {
    dims[i] = static_cast<std::uint8_t>(footprint.width() >> (8 * i));
    dims[4 + i] = static_cast<std::uint8_t>(footprint.height() >> (8 * i));
  }
  return fnv1a64(footprint.pixels(), fnv1a64(dims));
}

fs::path patch_bank_path(const fs::path& dir, PlantClass plant_class, std::uint64_t hash,
                         std::string_view channel) {
  return dir / std::string(to_string(plant_class)) / (hex64(hash) + "." + std::string(channel) + ".png");
}

void store_patch(const fs::path& dir, const BinaryMask& footprint, PlantClass plant_class,
                 const MultiSpectralImage& image) {
  const std::uint64_t hash = footprint_hash(footprint);
  const fs::path rgb = patch_bank_path(dir, plant_class, hash, "rgb");
  std::error_code ec;
  fs::create_directories(rgb.parent_path(), ec);
  if (ec) throw IoError(rgb.parent_path().string() + ": " + ec.message());
  save_patch(rgb, patch_bank_path(dir, plant_class, hash, "nir"), image);
}

}  // namespace agrisynth
