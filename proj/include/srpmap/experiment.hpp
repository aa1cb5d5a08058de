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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srpmap/cache.hpp"
#include "srpmap/config.hpp"
#include "srpmap/evaluator.hpp"
#include "srpmap/frontend.hpp"
#include "srpmap/interpolator.hpp"
#include "srpmap/lr_baseline.hpp"
#include "srpmap/sampler.hpp"
#include "srpmap/scene.hpp"
#include "srpmap/simkit.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

// Everything derived from the geometry and frame settings of a run.
struct Scene {
  RunConfig config;
  PairTable pairs;
  CandidateGrid grid;
  TdoaTable tdoa;
  SampleSpec spec;

  std::int64_t candidates() const { return static_cast<std::int64_t>(grid.size()); }
  std::int64_t pair_count() const { return static_cast<std::int64_t>(pairs.size()); }
  std::int64_t half() const { return config.pipeline.frame.half(); }
};

Scene build_scene(const RunConfig& config);

// The operator a method needs at run time. Only the members relevant to
// `method` are populated.
struct Operators {
  Method method = Method::Conventional;
  SamplingPath path = SamplingPath::Matrix;  // resolved
  std::int64_t rank = 0;
  std::int64_t sparsity = 0;
  std::optional<SrpMatrix> srp;
  std::optional<LowRankSrp> lr;
  std::optional<InterpMatrix> interp;
  std::optional<LowRankInterp> slri;
  std::optional<SparseInterp> sspi;
};

std::int64_t full_rank(const Scene& scene, Method method);
std::int64_t full_sparsity(const Scene& scene);
CostParams cost_params(const Scene& scene, const Operators& ops);

Operators precompute(const Scene& scene, const MethodConfig& method);
OperatorCache to_cache(const Scene& scene, const Operators& ops);
// Throws ConfigError when the cache was built for another geometry or size.
Operators from_cache(const Scene& scene, const OperatorCache& cache);

// Per-thread map evaluation over shared, read-only operators.
class MapEngine {
 public:
  explicit MapEngine(const Operators& ops);
  SrpMap map(const FdGcc& gcc);
  // Maps from precomputed TD GCC samples (sampling methods only).
  SrpMap map_samples(const TdGccSamples& xi) const;

 private:
  const Operators& ops_;
  std::optional<TdGccSampler> sampler_;
};

// FD GCC of every full frame of `audio`.
std::vector<FdGcc> frame_gccs(const MultichannelAudio& audio, const Scene& scene);

// Runs fn(i, worker) for i in [0, n) on up to `workers` threads. Work items
// must write only to their own slots.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, int)>& fn);

struct RenderedPlacement {
  SourcePlacement placement;
  std::vector<FdGcc> frames;
};
std::vector<RenderedPlacement> render_placements(const Scene& scene, int workers);

struct SweepRow {
  Method method = Method::Conventional;
  std::string budget;
  std::int64_t param = 0;  // R_H, R_Lambda or Q_Lambda; 0 when not applicable
  double c_rel = 0.0;
  double eps_h_db = 0.0;
  double eps_z_p10 = 0.0;
  double eps_z_p50 = 0.0;
  double eps_z_p90 = 0.0;
  double mean_rho = 0.0;
  double argmax_agree = 0.0;  // fraction of frames matching the conventional argmax
};

// Default budgets: ranks 2, 4, 8, ... then full; sparsities JP/2, JP, 2JP,
// 4JP and all.
std::vector<Budget> default_rank_sweep();
std::vector<Budget> default_sparsity_sweep();

std::vector<SweepRow> run_sweep(const Scene& scene, const std::vector<RenderedPlacement>& data, int workers);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Linear-interpolated percentile of possibly infinite values, q in [0, 1].
double percentile(std::vector<double> values, double q);

// CLI entry points. Each returns the text printed to stdout.
std::string cmd_precompute(const RunConfig& config, const std::filesystem::path& cache_path);
std::string cmd_map(const RunConfig& config, const std::filesystem::path& audio,
                    const std::optional<std::filesystem::path>& cache_path, const std::optional<Point3>& truth,
                    const std::filesystem::path& out);
std::string cmd_sweep(const RunConfig& config, const std::filesystem::path& out);
std::string cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace srp
