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

#include "srpmap/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "srpmap/error.hpp"
#include "srpmap/wav.hpp"

namespace srp {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

bool has_room(const ScenarioConfig& config) { return (config.room.array() > 0.0).all(); }

AxisAlignedBox room_box(const ScenarioConfig& config) { return {Point3::Zero(), config.room}; }

bool noisy(const ScenarioConfig& config) { return config.snr_db && std::isfinite(*config.snr_db); }

}  // namespace

void ScenarioConfig::validate() const {
  array.validate();
  if (!(sample_rate > 0.0)) throw ConfigError("scenario sample rate must be positive");
  if (placements < 1) throw ConfigError("need at least one source placement");
  if (reflection_order < 0) throw ConfigError("reflection order must be >= 0");
  if (reflection_order > 0 && !has_room(*this)) throw ConfigError("reflections need room dimensions");
  if (!(absorption >= 0.0 && absorption < 1.0)) throw ConfigError("absorption must lie in [0, 1)");
  if (field == Field::Far) {
    if (min_range < 2.0) throw ConfigError("far-field sources must be at least 2 m from the array");
    if (max_range < min_range) throw ConfigError("max_range must be >= min_range");
  }
  if (snr_db && std::isnan(*snr_db)) throw ConfigError("SNR is NaN");
  if (has_room(*this)) {
    for (const auto& p : array.positions) {
      if (!room_box(*this).contains(p)) throw ConfigError("microphone outside the room");
    }
  }
}

CandidateGrid scenario_grid(const ScenarioConfig& config) {
  if (config.field == Field::Far) return build_hemisphere_grid(config.hemisphere);
  std::optional<AxisAlignedBox> room;
  if (has_room(config)) room = room_box(config);
  return build_volume_grid(config.volume, room);
}

std::vector<SourcePlacement> place_sources(const ScenarioConfig& config, const CandidateGrid& grid) {
  config.validate();
  if (grid.field != config.field) throw ConfigError("grid and scenario disagree on the propagation model");
  std::mt19937_64 rng(derive_seed(config.seed, 0xB0CA));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  const Point3 center = config.array.centroid();
  const AxisAlignedBox box = grid.bounds();
  if (config.field == Field::Near && has_room(config) &&
      !(room_box(config).contains(box.lower) && room_box(config).contains(box.upper))) {
    throw ConfigError("source volume lies outside the room");
  }

  std::vector<SourcePlacement> out;
  out.reserve(static_cast<std::size_t>(config.placements));
  constexpr int kMaxTries = 10000;
  for (int s = 0; s < config.placements; ++s) {
    SourcePlacement placement;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxTries && !ok; ++attempt) {
      if (config.field == Field::Near) {
        if (config.on_grid) {
          const std::size_t i = pick(rng);
          placement.grid_index = static_cast<Eigen::Index>(i);
          placement.position = grid.points[i];
        } else {
          placement.grid_index.reset();
          for (int d = 0; d < 3; ++d) placement.position(d) = box.lower(d) + unit(rng) * (box.upper(d) - box.lower(d));
        }
        placement.truth = placement.position;
      } else {
        Point3 dir;
        if (config.on_grid) {
          const std::size_t i = pick(rng);
          placement.grid_index = static_cast<Eigen::Index>(i);
          dir = grid.points[i];
        } else {
          placement.grid_index.reset();
          // cos(polar) uniform gives a uniform density on the half-sphere.
          const double polar = std::acos(unit(rng));
          const double azimuth = 2.0 * std::numbers::pi * unit(rng);
          dir = lower_hemisphere_direction(polar, azimuth);
        }
        const double range = config.min_range + unit(rng) * (config.max_range - config.min_range);
        placement.position = center + range * dir;
        placement.truth = dir;
      }
      ok = !has_room(config) || config.reflection_order == 0 || room_box(config).contains(placement.position);
    }
    if (!ok) throw ConfigError("could not place a source satisfying the scenario constraints");
    out.push_back(placement);
  }
  return out;
}

std::array<double, kDelayTaps> fractional_delay_taps(double frac) {
  std::array<double, kDelayTaps> taps{};
  constexpr double half = kDelayTaps / 2;
  for (int t = 0; t < kDelayTaps; ++t) {
    const double x = (t - (kDelayTaps / 2 - 1)) - frac;
    double w = 0.0;
    if (std::abs(x) < half) {
      w = 0.42 + 0.5 * std::cos(std::numbers::pi * x / half) + 0.08 * std::cos(2.0 * std::numbers::pi * x / half);
    }
    const double px = std::numbers::pi * x;
    taps[static_cast<std::size_t>(t)] = (x == 0.0 ? 1.0 : std::sin(px) / px) * w;
  }
  return taps;
}

Eigen::VectorXd pink_noise(Eigen::Index length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  const auto step = [&]() {
    const double white = gauss(rng);
    b0 = 0.99886 * b0 + white * 0.0555179;
    b1 = 0.99332 * b1 + white * 0.0750759;
    b2 = 0.96900 * b2 + white * 0.1538520;
    b3 = 0.86650 * b3 + white * 0.3104856;
    b4 = 0.55000 * b4 + white * 0.5329522;
    b5 = -0.7616 * b5 - white * 0.0168980;
    const double pink = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
    b6 = white * 0.115926;
    return pink * 0.11;
  };
  // Let the slowest pole settle.
  for (int i = 0; i < 4096; ++i) step();
  Eigen::VectorXd out(length);
  for (Eigen::Index n = 0; n < length; ++n) out(n) = step();
  return out;
}

namespace {

struct Arrival {
  double delay = 0.0;  // samples
  double gain = 0.0;
};

Eigen::VectorXd source_signal(const ScenarioConfig& config, Eigen::Index length, std::uint64_t seed) {
  switch (config.source.kind) {
    case SignalKind::Pink:
      return pink_noise(length, seed);
    case SignalKind::White: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::VectorXd out(length);
      for (Eigen::Index n = 0; n < length; ++n) out(n) = gauss(rng);
      return out;
    }
    case SignalKind::File: {
      const MultichannelAudio audio = read_wav(config.source.file);
      if (std::abs(audio.sample_rate - config.sample_rate) > 1e-6) {
        throw ConfigError("source file sample rate does not match the scenario");
      }
      if (audio.length() == 0) throw ConfigError("source file is empty");
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<Eigen::Index> start(0, audio.length() - 1);
      const Eigen::Index s0 = start(rng);
      Eigen::VectorXd out(length);
      for (Eigen::Index n = 0; n < length; ++n) out(n) = audio.samples((s0 + n) % audio.length(), 0);
      return out;
    }
  }
  return {};
}

// Image sources of a shoebox with walls at 0 and room(d) along each axis.
std::vector<std::pair<Point3, int>> image_sources(const Point3& src, const Point3& room, int order) {
  std::vector<std::pair<Point3, int>> images;
  for (int nx = -order; nx <= order; ++nx)
    for (int ny = -order; ny <= order; ++ny)
      for (int nz = -order; nz <= order; ++nz)
        for (int q = 0; q < 8; ++q) {
          const int qv[3] = {q & 1, (q >> 1) & 1, (q >> 2) & 1};
          const int nv[3] = {nx, ny, nz};
          int reflections = 0;
          Point3 img;
          for (int d = 0; d < 3; ++d) {
            img(d) = (1 - 2 * qv[d]) * src(d) + 2.0 * nv[d] * room(d);
            reflections += std::abs(nv[d] - qv[d]) + std::abs(nv[d]);
          }
          if (reflections <= order) images.emplace_back(img, reflections);
        }
  return images;
}

void render_arrival(const Eigen::VectorXd& src, Eigen::Index lead, const Arrival& a, Eigen::Ref<Eigen::VectorXd> out) {
  const auto whole = static_cast<Eigen::Index>(std::floor(a.delay));
  const auto taps = fractional_delay_taps(a.delay - static_cast<double>(whole));
  constexpr Eigen::Index center = kDelayTaps / 2 - 1;
  for (Eigen::Index n = 0; n < out.size(); ++n) {
    const Eigen::Index base = n + lead - whole + center;
    double acc = 0.0;
    for (Eigen::Index t = 0; t < kDelayTaps; ++t) acc += taps[static_cast<std::size_t>(t)] * src(base - t);
    out(n) += a.gain * acc;
  }
}

}  // namespace

RenderedScene synthesize_scene(const ScenarioConfig& config, const SourcePlacement& placement, std::size_t index) {
  config.validate();
  if (config.length <= 0) throw ConfigError("scenario length must be positive");
  const auto& mics = config.array.positions;
  const double c = config.array.speed_of_sound;
  const double fs = config.sample_rate;
  const auto M = static_cast<Eigen::Index>(mics.size());
  for (const auto& p : mics) {
    if ((p - placement.position).norm() < 1e-6) throw InvalidGeometry("source coincides with a microphone");
  }

  std::vector<std::vector<Arrival>> arrivals(static_cast<std::size_t>(M));
  const Point3 center = config.array.centroid();
  for (Eigen::Index m = 0; m < M; ++m) {
    const Point3& pm = mics[static_cast<std::size_t>(m)];
    if (config.field == Field::Near) {
      const double r = (pm - placement.position).norm();
      arrivals[static_cast<std::size_t>(m)].push_back({r / c * fs, 1.0 / r});
    } else {
      const Point3 offset = placement.position - center;
      const double range = offset.norm();
      const Point3 dir = offset / range;
      arrivals[static_cast<std::size_t>(m)].push_back({(range - (pm - center).dot(dir)) / c * fs, 1.0 / range});
    }
  }
  const std::size_t direct_count = 1;
  if (config.reflection_order > 0) {
    const double beta = std::sqrt(1.0 - config.absorption);
    for (const auto& [img, refl] : image_sources(placement.position, config.room, config.reflection_order)) {
      if (refl == 0) continue;
      for (Eigen::Index m = 0; m < M; ++m) {
        const double r = (mics[static_cast<std::size_t>(m)] - img).norm();
        arrivals[static_cast<std::size_t>(m)].push_back({r / c * fs, std::pow(beta, refl) / r});
      }
    }
  }

  double max_delay = 0.0;
  for (const auto& list : arrivals)
    for (const auto& a : list) max_delay = std::max(max_delay, a.delay);
  const Eigen::Index lead = static_cast<Eigen::Index>(std::ceil(max_delay)) + kDelayTaps;
  const Eigen::Index src_len = config.length + lead + kDelayTaps + 1;
  const std::uint64_t stream = derive_seed(config.seed, 2 * index + 1);
  const Eigen::VectorXd src = source_signal(config, src_len, stream);

  RenderedScene scene;
  scene.direct = Eigen::MatrixXd::Zero(config.length, M);
  Eigen::MatrixXd reverb = Eigen::MatrixXd::Zero(config.length, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto& list = arrivals[static_cast<std::size_t>(m)];
    for (std::size_t a = 0; a < list.size(); ++a) {
      if (a < direct_count) {
        render_arrival(src, lead, list[a], scene.direct.col(m));
      } else {
        render_arrival(src, lead, list[a], reverb.col(m));
      }
    }
  }

  scene.noise = Eigen::MatrixXd::Zero(config.length, M);
  if (noisy(config)) {
    const double snr = std::pow(10.0, *config.snr_db / 10.0);
    for (Eigen::Index m = 0; m < M; ++m) {
      Eigen::VectorXd raw = pink_noise(config.length, derive_seed(stream, static_cast<std::uint64_t>(m) + 17));
      const double p_signal = scene.direct.col(m).squaredNorm();
      const double p_noise = raw.squaredNorm();
      if (p_noise > 0.0) scene.noise.col(m) = raw * std::sqrt(p_signal / (p_noise * snr));
    }
  }

  scene.mix.sample_rate = fs;
  scene.mix.samples = scene.direct + reverb + scene.noise;
  return scene;
}

MultichannelAudio synthesize(const ScenarioConfig& config, const SourcePlacement& placement, std::size_t index) {
  return synthesize_scene(config, placement, index).mix;
}

}  // namespace srp
