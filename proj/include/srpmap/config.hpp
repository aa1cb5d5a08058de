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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srpmap/evaluator.hpp"
#include "srpmap/frontend.hpp"
#include "srpmap/sampler.hpp"
#include "srpmap/simkit.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

// A rank or sparsity budget: an absolute count, a multiple of J*P
// ("2JP"), or the full size of the operator ("full" / "all").
struct Budget {
  enum class Kind { Absolute, PerCandidatePair, Full };
  Kind kind = Kind::Full;
  double value = 0.0;

  static Budget parse(const std::string& text);
  std::string label() const;
  // `full` is the value "full"/"all" stands for; results are clamped to it.
  std::int64_t resolve(std::int64_t candidates, std::int64_t pairs, std::int64_t full) const;
};

struct PipelineConfig {
  FrameSpec frame;
  Weighting weighting = Weighting::Phat;
  int aux = kDefaultAuxSamples;
  std::optional<double> phat_floor;
};

struct MethodConfig {
  Method method = Method::Conventional;
  Budget rank;
  Budget sparsity;
  SamplingPath path = SamplingPath::Auto;
};

struct SweepConfig {
  std::vector<Budget> lr_ranks;
  std::vector<Budget> slri_ranks;
  std::vector<Budget> sparsities;
};

struct RunConfig {
  ScenarioConfig scenario;  // sample rate and length are derived from the pipeline
  int frames = 1;           // frames per placement
  PipelineConfig pipeline;
  MethodConfig method;
  SweepConfig sweep;
  std::filesystem::path cache_path;
  std::filesystem::path out_path;
  int workers = 1;
  std::size_t memory_cap = kDefaultMemoryCap;
  // Hash over everything that shapes the operators (geometry, grid, frame,
  // N_aux); stored in caches to refuse mismatched runs.
  std::uint64_t geometry_hash = 0;
};

// Parses a JSON document. Unknown keys, wrong types and inconsistent values
// raise ConfigError naming the offending key.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace srp
