// Copyright 2026 The srpmap Authors.
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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "srpmap/frontend.hpp"
#include "srpmap/scene.hpp"

namespace srp {

enum class SignalKind { Pink, White, File };

struct SourceSignalSpec {
  SignalKind kind = SignalKind::Pink;
  std::filesystem::path file;  // mono WAV at the scenario sample rate, for SignalKind::File
};

struct ScenarioConfig {
  Field field = Field::Near;
  // Zero dimensions mean free field; reflections then require a room.
  Point3 room = Point3::Zero();
  MicrophoneArray array;
  VolumeGridSpec volume;          // near field
  HemisphereGridSpec hemisphere;  // far field
  SourceSignalSpec source;
  int reflection_order = 0;       // 0 = anechoic
  double absorption = 0.5;        // wall energy absorption in [0, 1)
  std::optional<double> snr_db;   // unset or +inf renders without noise
  int placements = 1;
  bool on_grid = false;           // draw sources from the candidate grid
  double min_range = 2.0;         // far field, meters from the array centroid
  double max_range = 4.0;
  std::uint64_t seed = 1;
  double sample_rate = 4000.0;
  Eigen::Index length = 0;        // samples per rendered placement

  // Throws ConfigError for inconsistent settings.
  void validate() const;
};

CandidateGrid scenario_grid(const ScenarioConfig& config);

struct SourcePlacement {
  Point3 position = Point3::Zero();  // meters
  Point3 truth = Point3::Zero();     // position (near field) or unit direction (far field)
  std::optional<Eigen::Index> grid_index;
};

// Deterministic for a given seed. Near-field sources fall inside the grid's
// bounding box, far-field sources at min_range..max_range from the array.
std::vector<SourcePlacement> place_sources(const ScenarioConfig& config, const CandidateGrid& grid);

// 64-tap Blackman-windowed sinc for a delay of `frac` in [0, 1) samples.
// Tap t realizes lag t - 31.
inline constexpr int kDelayTaps = 64;
std::array<double, kDelayTaps> fractional_delay_taps(double frac);

struct RenderedScene {
  MultichannelAudio mix;
  Eigen::MatrixXd direct;  // direct-path component, samples x channels
  Eigen::MatrixXd noise;
};

// Renders one placement. The direct path is a point source with 1/r gain in
// the near field and a plane wave from the source direction in the far field;
// reflections use the image method up to reflection_order. Noise is pink,
// independent per channel, scaled per channel to the configured SNR against
// that channel's direct-path power. `index` selects the placement's RNG stream.
RenderedScene synthesize_scene(const ScenarioConfig& config, const SourcePlacement& placement, std::size_t index);
MultichannelAudio synthesize(const ScenarioConfig& config, const SourcePlacement& placement, std::size_t index);

// Pink (1/f) noise, Kellet's filter on white Gaussian noise.
Eigen::VectorXd pink_noise(Eigen::Index length, std::uint64_t seed);

// Mixes two words into a new seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace srp
