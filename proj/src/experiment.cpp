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

#include "srpmap/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "srpmap/error.hpp"
#include "srpmap/wav.hpp"

namespace srp {

Scene build_scene(const RunConfig& config) {
  Scene scene;
  scene.config = config;
  scene.config.scenario.array.validate();
  scene.config.pipeline.frame.validate();
  scene.pairs = enumerate_pairs(config.scenario.array);
  scene.grid = scenario_grid(config.scenario);
  scene.tdoa = tdoa_table(config.scenario.array, scene.pairs, scene.grid);
  scene.spec = sample_spec(scene.tdoa, config.pipeline.frame, config.pipeline.aux);
  return scene;
}

std::int64_t full_rank(const Scene& scene, Method method) {
  const std::int64_t J = scene.candidates();
  if (method == Method::LowRank) return std::min(J, scene.pair_count() * (scene.half() - 1));
  return std::min<std::int64_t>(J, scene.spec.total());
}

std::int64_t full_sparsity(const Scene& scene) { return scene.candidates() * scene.spec.total(); }

CostParams cost_params(const Scene& scene, const Operators& ops) {
  CostParams params;
  params.candidates = scene.candidates();
  params.pairs = scene.pair_count();
  params.half = scene.half();
  params.sample_count = scene.spec.total();
  params.rank_h = ops.method == Method::LowRank ? ops.rank : 0;
  params.rank_lambda = ops.method == Method::SamplingLowRankInterp ? ops.rank : 0;
  params.sparsity = ops.method == Method::SamplingSparseInterp ? ops.sparsity : 0;
  params.path = ops.path;
  return params;
}

namespace {

bool uses_sampling(Method m) {
  return m == Method::SamplingInterp || m == Method::SamplingLowRankInterp || m == Method::SamplingSparseInterp;
}

std::int64_t resolve_rank(const Scene& scene, Method method, const Budget& budget) {
  const std::int64_t full = full_rank(scene, method);
  const std::int64_t r = budget.resolve(scene.candidates(), scene.pair_count(), full);
  if (r < 1) throw ConfigError("rank budget " + budget.label() + " resolves to " + std::to_string(r));
  return r;
}

}  // namespace

Operators precompute(const Scene& scene, const MethodConfig& method) {
  const RunConfig& cfg = scene.config;
  const FrameSpec& frame = cfg.pipeline.frame;
  Operators ops;
  ops.method = method.method;
  if (uses_sampling(method.method)) ops.path = resolve_path(method.path, scene.spec.mean_samples(), scene.half());
  switch (method.method) {
    case Method::Conventional:
      ops.srp = build_srp_matrix(scene.tdoa, frame, cfg.memory_cap);
      break;
    case Method::LowRank: {
      ops.rank = resolve_rank(scene, method.method, method.rank);
      ops.lr = truncate_srp_matrix(build_srp_matrix(scene.tdoa, frame, cfg.memory_cap), ops.rank);
      break;
    }
    case Method::SamplingInterp:
      ops.interp = build_interp_matrix(scene.tdoa, scene.spec, frame, cfg.memory_cap);
      break;
    case Method::SamplingLowRankInterp:
      ops.rank = resolve_rank(scene, method.method, method.rank);
      ops.slri = truncate_low_rank(build_interp_matrix(scene.tdoa, scene.spec, frame, cfg.memory_cap), ops.rank);
      break;
    case Method::SamplingSparseInterp:
      ops.sparsity = method.sparsity.resolve(scene.candidates(), scene.pair_count(), full_sparsity(scene));
      ops.sspi = truncate_sparse(build_interp_matrix(scene.tdoa, scene.spec, frame, cfg.memory_cap), ops.sparsity);
      break;
  }
  return ops;
}

OperatorCache to_cache(const Scene& scene, const Operators& ops) {
  OperatorCache cache;
  cache.geometry_hash = scene.config.geometry_hash;
  cache.method = ops.method;
  cache.path = ops.path;
  cache.candidates = scene.candidates();
  cache.pairs = scene.pair_count();
  cache.half = scene.half();
  cache.records["budget"] = std::vector<std::int64_t>{ops.rank, ops.sparsity};
  switch (ops.method) {
    case Method::Conventional:
      cache.records["H"] = ops.srp->H;
      break;
    case Method::LowRank:
      cache.records["H_tall"] = ops.lr->tall;
      cache.records["H_fat"] = ops.lr->fat;
      cache.records["H_sv"] = Eigen::MatrixXd(ops.lr->singular_values);
      break;
    case Method::SamplingInterp:
      put_spec(cache, ops.interp->spec);
      cache.records["lambda"] = Eigen::MatrixXd(ops.interp->lambda);
      break;
    case Method::SamplingLowRankInterp:
      put_spec(cache, ops.slri->spec);
      cache.records["lambda_tall"] = ops.slri->tall;
      cache.records["lambda_fat"] = ops.slri->fat;
      cache.records["lambda_sv"] = Eigen::MatrixXd(ops.slri->singular_values);
      break;
    case Method::SamplingSparseInterp:
      put_spec(cache, ops.sspi->spec);
      cache.records["lambda_sp"] = ops.sspi->lambda;
      break;
  }
  return cache;
}

namespace {

void expect_shape(Eigen::Index rows, Eigen::Index cols, Eigen::Index want_rows, Eigen::Index want_cols,
                  const char* what) {
  if (rows != want_rows || cols != want_cols) {
    throw ConfigError(fmt::format("cache {} is {}x{}, the configuration needs {}x{}", what, rows, cols, want_rows,
                                  want_cols));
  }
}

}  // namespace

Operators from_cache(const Scene& scene, const OperatorCache& cache) {
  if (cache.geometry_hash != scene.config.geometry_hash) {
    throw ConfigError(fmt::format("cache geometry hash {:016x} does not match the configuration ({:016x})",
                                  cache.geometry_hash, scene.config.geometry_hash));
  }
  if (cache.candidates != scene.candidates() || cache.pairs != scene.pair_count() || cache.half != scene.half()) {
    throw ConfigError(fmt::format("cache dimensions J={} P={} K={} do not match the configuration (J={} P={} K={})",
                                  cache.candidates, cache.pairs, cache.half, scene.candidates(), scene.pair_count(),
                                  scene.half()));
  }
  const Eigen::Index J = scene.candidates();
  const int P = static_cast<int>(scene.pair_count());
  const int bins = static_cast<int>(scene.half()) - 1;
  Operators ops;
  ops.method = cache.method;
  ops.path = cache.path;
  const auto& budget = cache.integers("budget");
  if (budget.size() != 2) throw FormatError("cache: malformed budget record");
  ops.rank = budget[0];
  ops.sparsity = budget[1];
  SampleSpec spec;
  if (uses_sampling(ops.method)) {
    spec = get_spec(cache);
    if (spec.half_widths != scene.spec.half_widths || spec.half != scene.spec.half) {
      throw ConfigError("cache sample layout does not match the configuration");
    }
    if (ops.path == SamplingPath::Auto) throw FormatError("cache: unresolved sampling path");
  }
  const Eigen::Index PN = scene.spec.total();
  switch (ops.method) {
    case Method::Conventional: {
      SrpMatrix srp{P, bins, cache.complex("H")};
      expect_shape(srp.H.rows(), srp.H.cols(), J, static_cast<Eigen::Index>(P) * bins, "H");
      ops.srp = std::move(srp);
      break;
    }
    case Method::LowRank: {
      LowRankSrp lr;
      lr.pairs = P;
      lr.bins = bins;
      lr.tall = cache.complex("H_tall");
      lr.fat = cache.complex("H_fat");
      lr.singular_values = cache.real("H_sv");
      expect_shape(lr.tall.rows(), lr.tall.cols(), J, ops.rank, "H_tall");
      expect_shape(lr.fat.rows(), lr.fat.cols(), ops.rank, static_cast<Eigen::Index>(P) * bins, "H_fat");
      ops.lr = std::move(lr);
      break;
    }
    case Method::SamplingInterp: {
      const auto& lambda = cache.real("lambda");
      expect_shape(lambda.rows(), lambda.cols(), J, PN, "lambda");
      ops.interp = InterpMatrix{spec, RowMatrixXd(lambda)};
      break;
    }
    case Method::SamplingLowRankInterp: {
      LowRankInterp lr;
      lr.spec = spec;
      lr.tall = cache.real("lambda_tall");
      lr.fat = cache.real("lambda_fat");
      lr.singular_values = cache.real("lambda_sv");
      expect_shape(lr.tall.rows(), lr.tall.cols(), J, ops.rank, "lambda_tall");
      expect_shape(lr.fat.rows(), lr.fat.cols(), ops.rank, PN, "lambda_fat");
      ops.slri = std::move(lr);
      break;
    }
    case Method::SamplingSparseInterp: {
      SparseInterp sp{spec, cache.sparse("lambda_sp")};
      expect_shape(sp.lambda.rows, sp.lambda.cols, J, PN, "lambda_sp");
      ops.sspi = std::move(sp);
      break;
    }
  }
  return ops;
}

MapEngine::MapEngine(const Operators& ops) : ops_(ops) {
  if (ops.interp) sampler_.emplace(ops.interp->spec);
  if (ops.slri) sampler_.emplace(ops.slri->spec);
  if (ops.sspi) sampler_.emplace(ops.sspi->spec);
}

SrpMap MapEngine::map(const FdGcc& gcc) {
  switch (ops_.method) {
    case Method::Conventional:
      return srp_map_exact(*ops_.srp, gcc);
    case Method::LowRank:
      return lr_map(*ops_.lr, gcc);
    default:
      return map_samples(sampler_->sample(gcc, ops_.path));
  }
}

SrpMap MapEngine::map_samples(const TdGccSamples& xi) const {
  switch (ops_.method) {
    case Method::SamplingInterp:
      return si_map(*ops_.interp, xi);
    case Method::SamplingLowRankInterp:
      return slri_map(*ops_.slri, xi);
    case Method::SamplingSparseInterp:
      return sspi_map(*ops_.sspi, xi);
    default:
      throw ConfigError(std::string("method ") + to_string(ops_.method) + " does not use TD GCC samples");
  }
}

std::vector<FdGcc> frame_gccs(const MultichannelAudio& audio, const Scene& scene) {
  const auto& pl = scene.config.pipeline;
  if (audio.channels() != static_cast<Eigen::Index>(scene.config.scenario.array.size())) {
    throw DimensionError(fmt::format("audio has {} channels, the array has {} microphones", audio.channels(),
                                     scene.config.scenario.array.size()));
  }
  if (audio.sample_rate != pl.frame.sample_rate) {
    throw ConfigError(fmt::format("audio sample rate {} differs from the pipeline rate {}", audio.sample_rate,
                                  pl.frame.sample_rate));
  }
  std::vector<FdGcc> out;
  const Eigen::Index frames = frame_count(audio, pl.frame);
  out.reserve(static_cast<std::size_t>(frames));
  for (Eigen::Index f = 0; f < frames; ++f) {
    out.push_back(fd_gcc(stft_frame(audio, pl.frame, f), scene.pairs, pl.weighting, pl.phat_floor));
  }
  return out;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, int)>& fn) {
  const int threads = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<RenderedPlacement> render_placements(const Scene& scene, int workers) {
  const ScenarioConfig& sc = scene.config.scenario;
  const auto placements = place_sources(sc, scene.grid);
  std::vector<RenderedPlacement> out(placements.size());
  parallel_for(placements.size(), workers, [&](std::size_t i, int) {
    out[i].placement = placements[i];
    out[i].frames = frame_gccs(synthesize(sc, placements[i], i), scene);
  });
  return out;
}

std::vector<Budget> default_rank_sweep() {
  std::vector<Budget> out;
  for (int r = 2; r <= (1 << 16); r *= 2) out.push_back(Budget{Budget::Kind::Absolute, static_cast<double>(r)});
  out.push_back(Budget{});
  return out;
}

std::vector<Budget> default_sparsity_sweep() {
  std::vector<Budget> out;
  for (double x : {0.5, 1.0, 2.0, 4.0}) out.push_back(Budget{Budget::Kind::PerCandidatePair, x});
  out.push_back(Budget{});
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi || values[lo] == values[hi]) return values[lo];
  // Interpolating towards an infinite value is undefined; take the nearer one.
  if (std::isinf(values[lo]) || std::isinf(values[hi])) return pos - static_cast<double>(lo) < 0.5 ? values[lo] : values[hi];
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

struct FrameRef {
  const FdGcc* gcc;
  Point3 truth;
};

struct SweepContext {
  const Scene& scene;
  std::vector<FrameRef> frames;
  std::vector<SrpMap> reference;
  std::vector<Eigen::Index> reference_argmax;
  int workers;
  double threshold;
};

void fill_map_metrics(SweepRow& row, const SweepContext& ctx, const std::vector<SrpMap>& maps) {
  std::vector<double> eps;
  eps.reserve(maps.size());
  double rho = 0.0;
  std::size_t agree = 0;
  for (std::size_t f = 0; f < maps.size(); ++f) {
    eps.push_back(map_error(maps[f], ctx.reference[f]));
    const Eigen::Index i = argmax_lowest(maps[f]);
    agree += i == ctx.reference_argmax[f] ? 1 : 0;
    rho += loc_accuracy(loc_error(ctx.scene.grid.points[static_cast<std::size_t>(i)], ctx.frames[f].truth,
                                  ctx.scene.grid.field),
                        ctx.threshold);
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, maps.size()));
  row.eps_z_p10 = percentile(eps, 0.1);
  row.eps_z_p50 = percentile(eps, 0.5);
  row.eps_z_p90 = percentile(eps, 0.9);
  row.mean_rho = rho / n;
  row.argmax_agree = static_cast<double>(agree) / n;
}

std::vector<SrpMap> maps_from_gcc(const SweepContext& ctx, const std::function<SrpMap(const FdGcc&)>& fn) {
  std::vector<SrpMap> out(ctx.frames.size());
  parallel_for(out.size(), ctx.workers, [&](std::size_t f, int) { out[f] = fn(*ctx.frames[f].gcc); });
  return out;
}

std::vector<SrpMap> maps_from_samples(const SweepContext& ctx, const std::vector<TdGccSamples>& xi,
                                      const std::function<SrpMap(const TdGccSamples&)>& fn) {
  std::vector<SrpMap> out(xi.size());
  parallel_for(out.size(), ctx.workers, [&](std::size_t f, int) { out[f] = fn(xi[f]); });
  return out;
}

SweepRow make_row(const Scene& scene, Method method, const std::string& budget, std::int64_t param,
                  SamplingPath path) {
  Operators ops;
  ops.method = method;
  ops.path = path;
  ops.rank = method == Method::SamplingSparseInterp ? 0 : param;
  ops.sparsity = method == Method::SamplingSparseInterp ? param : 0;
  SweepRow row;
  row.method = method;
  row.budget = budget;
  row.param = param;
  row.c_rel = cost(method, cost_params(scene, ops)).relative;
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Scene& scene, const std::vector<RenderedPlacement>& data, int workers) {
  const RunConfig& cfg = scene.config;
  const FrameSpec& frame = cfg.pipeline.frame;
  SweepContext ctx{scene, {}, {}, {}, workers, default_threshold(scene.grid.field)};
  for (const auto& pl : data) {
    for (const auto& g : pl.frames) ctx.frames.push_back({&g, pl.placement.truth});
  }
  const std::int64_t J = scene.candidates();
  const std::int64_t P = scene.pair_count();
  const SamplingPath path = resolve_path(cfg.method.path, scene.spec.mean_samples(), scene.half());

  const SrpMatrix srp = build_srp_matrix(scene.tdoa, frame, cfg.memory_cap);
  ctx.reference = maps_from_gcc(ctx, [&](const FdGcc& g) { return srp_map_exact(srp, g); });
  for (const auto& z : ctx.reference) ctx.reference_argmax.push_back(argmax_lowest(z));

  std::vector<SweepRow> rows;
  {
    SweepRow row = make_row(scene, Method::Conventional, "full", 0, path);
    row.eps_h_db = -std::numeric_limits<double>::infinity();
    fill_map_metrics(row, ctx, ctx.reference);
    rows.push_back(row);
  }

  const auto rank_budgets = cfg.sweep.lr_ranks.empty() ? default_rank_sweep() : cfg.sweep.lr_ranks;
  {
    const LowRankSrp full = truncate_srp_matrix(srp, full_rank(scene, Method::LowRank));
    std::int64_t last = -1;
    for (const auto& b : rank_budgets) {
      const std::int64_t r = b.resolve(J, P, full_rank(scene, Method::LowRank));
      if (r < 1 || r == last) continue;
      last = r;
      const LowRankSrp lr = retruncate(full, r);
      SweepRow row = make_row(scene, Method::LowRank, b.label(), r, path);
      row.eps_h_db = tail_error_db(full.singular_values, r);
      fill_map_metrics(row, ctx, maps_from_gcc(ctx, [&](const FdGcc& g) { return lr_map(lr, g); }));
      rows.push_back(row);
    }
  }

  const InterpMatrix interp = build_interp_matrix(scene.tdoa, scene.spec, frame, cfg.memory_cap);
  std::vector<TdGccSamples> xi(ctx.frames.size());
  {
    std::vector<std::optional<TdGccSampler>> samplers(static_cast<std::size_t>(std::max(1, workers)));
    parallel_for(xi.size(), workers, [&](std::size_t f, int w) {
      auto& s = samplers[static_cast<std::size_t>(w)];
      if (!s) s.emplace(scene.spec);
      xi[f] = s->sample(*ctx.frames[f].gcc, path);
    });
  }
  {
    SweepRow row = make_row(scene, Method::SamplingInterp, "full", 0, path);
    row.eps_h_db = matrix_error(lift_interp(Eigen::MatrixXd(interp.lambda), scene.spec), srp.H);
    fill_map_metrics(row, ctx, maps_from_samples(ctx, xi, [&](const TdGccSamples& x) { return si_map(interp, x); }));
    rows.push_back(row);
  }

  const auto slri_budgets = cfg.sweep.slri_ranks.empty() ? default_rank_sweep() : cfg.sweep.slri_ranks;
  {
    const std::int64_t cap = full_rank(scene, Method::SamplingLowRankInterp);
    const LowRankInterp full = truncate_low_rank(interp, cap);
    std::int64_t last = -1;
    for (const auto& b : slri_budgets) {
      const std::int64_t r = b.resolve(J, P, cap);
      if (r < 1 || r == last) continue;
      last = r;
      const LowRankInterp lr = retruncate(full, r);
      SweepRow row = make_row(scene, Method::SamplingLowRankInterp, b.label(), r, path);
      row.eps_h_db = matrix_error(lift_interp(lr.dense(), scene.spec), srp.H);
      fill_map_metrics(row, ctx,
                       maps_from_samples(ctx, xi, [&](const TdGccSamples& x) { return slri_map(lr, x); }));
      rows.push_back(row);
    }
  }

  const auto sparsities = cfg.sweep.sparsities.empty() ? default_sparsity_sweep() : cfg.sweep.sparsities;
  {
    std::int64_t last = -1;
    for (const auto& b : sparsities) {
      const std::int64_t q = b.resolve(J, P, full_sparsity(scene));
      if (q == last) continue;
      last = q;
      const SparseInterp sp = truncate_sparse(interp, q);
      SweepRow row = make_row(scene, Method::SamplingSparseInterp, b.label(), q, path);
      row.eps_h_db = matrix_error(lift_interp(sp.lambda.dense(), scene.spec), srp.H);
      fill_map_metrics(row, ctx, maps_from_samples(ctx, xi, [&](const TdGccSamples& x) { return sspi_map(sp, x); }));
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "method,budget,param,c_rel,eps_h_db,eps_z_p10_db,eps_z_p50_db,eps_z_p90_db,mean_rho,argmax_agree\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", to_string(r.method), r.budget,
                       r.param, r.c_rel, r.eps_h_db, r.eps_z_p10, r.eps_z_p50, r.eps_z_p90, r.mean_rho,
                       r.argmax_agree);
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string describe_cost(const Scene& scene, const Operators& ops) {
  const CostReport rep = cost(ops.method, cost_params(scene, ops));
  std::string s = fmt::format("method={} J={} P={} K={} N={:.6g}", to_string(ops.method), scene.candidates(),
                              scene.pair_count(), scene.half(), scene.spec.mean_samples());
  if (ops.method == Method::LowRank || ops.method == Method::SamplingLowRankInterp) s += fmt::format(" rank={}", ops.rank);
  if (ops.method == Method::SamplingSparseInterp) s += fmt::format(" sparsity={}", ops.sparsity);
  if (uses_sampling(ops.method)) s += fmt::format(" path={}", to_string(rep.resolved_path));
  s += fmt::format("\ncost={:.9g} conventional={:.9g} c_rel={:.6g}\n", rep.count, rep.baseline, rep.relative);
  return s;
}

}  // namespace

std::string cmd_precompute(const RunConfig& config, const std::filesystem::path& cache_path) {
  const Scene scene = build_scene(config);
  const Operators ops = precompute(scene, config.method);
  if (cache_path.has_parent_path()) std::filesystem::create_directories(cache_path.parent_path());
  save_cache(cache_path, to_cache(scene, ops));
  return describe_cost(scene, ops) + fmt::format("wrote {}\n", cache_path.string());
}

std::string cmd_map(const RunConfig& config, const std::filesystem::path& audio,
                    const std::optional<std::filesystem::path>& cache_path, const std::optional<Point3>& truth,
                    const std::filesystem::path& out) {
  const Scene scene = build_scene(config);
  const Operators ops = cache_path ? from_cache(scene, load_cache(*cache_path)) : precompute(scene, config.method);
  if (cache_path && ops.method != config.method.method) {
    throw ConfigError(fmt::format("cache holds method {}, the configuration asks for {}", to_string(ops.method),
                                  to_string(config.method.method)));
  }
  const auto frames = frame_gccs(read_audio(audio, static_cast<int>(config.scenario.array.size()),
                                            config.pipeline.frame.sample_rate),
                                 scene);
  std::vector<SrpMap> maps(frames.size());
  {
    std::vector<std::optional<MapEngine>> engines(static_cast<std::size_t>(std::max(1, config.workers)));
    parallel_for(frames.size(), config.workers, [&](std::size_t f, int w) {
      auto& e = engines[static_cast<std::size_t>(w)];
      if (!e) e.emplace(ops);
      maps[f] = e->map(frames[f]);
    });
  }
  std::string csv = "frame,index,x,y,z,value\n";
  std::string summary = "frame,i_max,x,y,z,value,eps_s,rho\n";
  const double thr = default_threshold(scene.grid.field);
  for (std::size_t f = 0; f < maps.size(); ++f) {
    for (std::size_t i = 0; i < scene.grid.size(); ++i) {
      const Point3& q = scene.grid.points[i];
      csv += fmt::format("{},{},{:.9g},{:.9g},{:.9g},{:.17g}\n", f, i, q.x(), q.y(), q.z(),
                         maps[f](static_cast<Eigen::Index>(i)));
    }
    if (maps[f].size() == 0) continue;
    const Location loc = locate(maps[f], scene.grid);
    std::string eps = "";
    std::string rho = "";
    if (truth) {
      const LocResult r = evaluate_location(maps[f], scene.grid, *truth, thr);
      eps = fmt::format("{:.9g}", r.error_reported);
      rho = fmt::format("{:.9g}", r.accuracy);
    }
    summary += fmt::format("{},{},{:.9g},{:.9g},{:.9g},{:.17g},{},{}\n", f, loc.index, loc.point.x(), loc.point.y(),
                           loc.point.z(), maps[f](loc.index), eps, rho);
  }
  write_text(out, csv);
  std::filesystem::path summary_path = out;
  summary_path.replace_extension(".summary.csv");
  write_text(summary_path, summary);
  return describe_cost(scene, ops) +
         fmt::format("{} frames -> {} and {}\n", maps.size(), out.string(), summary_path.string());
}

std::string cmd_sweep(const RunConfig& config, const std::filesystem::path& out) {
  const Scene scene = build_scene(config);
  const auto data = render_placements(scene, config.workers);
  const auto rows = run_sweep(scene, data, config.workers);
  write_text(out, sweep_csv(rows));
  std::size_t frames = 0;
  for (const auto& d : data) frames += d.frames.size();
  return fmt::format("J={} P={} K={} N={:.6g}; {} placements, {} frames, {} sweep rows -> {}\n", scene.candidates(),
                     scene.pair_count(), scene.half(), scene.spec.mean_samples(), data.size(), frames, rows.size(),
                     out.string());
}

std::string cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir) {
  const Scene scene = build_scene(config);
  const ScenarioConfig& sc = config.scenario;
  const auto placements = place_sources(sc, scene.grid);
  std::filesystem::create_directories(out_dir);
  parallel_for(placements.size(), config.workers, [&](std::size_t i, int) {
    write_wav(out_dir / fmt::format("placement_{:04d}.wav", i), synthesize(sc, placements[i], i));
  });
  std::string truth = "placement,file,x,y,z,truth_x,truth_y,truth_z,grid_index\n";
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& p = placements[i];
    truth += fmt::format("{},placement_{:04d}.wav,{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", i, i,
                         p.position.x(), p.position.y(), p.position.z(), p.truth.x(), p.truth.y(), p.truth.z(),
                         p.grid_index ? static_cast<long long>(*p.grid_index) : -1LL);
  }
  write_text(out_dir / "truth.csv", truth);
  return fmt::format("{} placements -> {}\n", placements.size(), out_dir.string());
}

}  // namespace srp
