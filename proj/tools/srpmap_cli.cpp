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

// Command-line front end: precompute, map, sweep and simulate.

#include <fmt/format.h>

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "srpmap/config.hpp"
#include "srpmap/error.hpp"
#include "srpmap/experiment.hpp"

namespace {

struct Options {
  std::string config;
  std::string cache;
  std::string out;
  std::string audio;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> method;
  std::optional<std::string> rank;
  std::optional<std::string> sparsity;
  std::optional<std::string> path;
  std::vector<double> truth;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override scenario.seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--method", o.method, "conv, lr, si, slri or sspi")
      ->check(CLI::IsMember({"conv", "lr", "si", "slri", "sspi"}));
  cmd->add_option("--rank", o.rank, "R_H or R_Lambda: a count, <x>JP or full");
  cmd->add_option("--sparsity", o.sparsity, "Q_Lambda: a count, <x>JP or all");
  cmd->add_option("--path", o.path, "TD GCC sampling path")->check(CLI::IsMember({"matrix", "ifft", "auto"}));
}

srp::RunConfig resolve(const Options& o) {
  srp::RunConfig cfg = srp::load_run_config(o.config);
  if (o.seed) cfg.scenario.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.method) cfg.method.method = srp::parse_method(*o.method);
  if (o.rank) cfg.method.rank = srp::Budget::parse(*o.rank);
  if (o.sparsity) cfg.method.sparsity = srp::Budget::parse(*o.sparsity);
  if (o.path) {
    cfg.method.path = *o.path == "matrix" ? srp::SamplingPath::Matrix
                      : *o.path == "ifft" ? srp::SamplingPath::Ifft
                                          : srp::SamplingPath::Auto;
  }
  return cfg;
}

std::string pick(const std::string& flag, const std::filesystem::path& fallback, const char* what) {
  if (!flag.empty()) return flag;
  if (!fallback.empty()) return fallback.string();
  throw srp::ConfigError(fmt::format("no {} given (flag or config output section)", what));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srpmap: fast steered response power maps"};
  app.require_subcommand(1);
  Options o;

  auto* pre = app.add_subcommand("precompute", "build and cache the operator of the configured method");
  add_common(pre, o);
  pre->add_option("--cache", o.cache, "cache file to write");

  auto* map = app.add_subcommand("map", "compute per-frame SRP maps of a recording");
  add_common(map, o);
  map->add_option("--cache", o.cache, "operator cache to use instead of rebuilding")->check(CLI::ExistingFile);
  map->add_option("--audio", o.audio, "multichannel WAV, or raw float32 interleaved")->required();
  map->add_option("--out", o.out, "map CSV; the summary goes next to it");
  map->add_option("--truth", o.truth, "true source position or direction, x y z")->expected(3);

  auto* sweep = app.add_subcommand("sweep", "error and accuracy versus complexity over rank/sparsity budgets");
  add_common(sweep, o);
  sweep->add_option("--out", o.out, "metrics CSV");

  auto* sim = app.add_subcommand("simulate", "render the configured placements to WAV files");
  add_common(sim, o);
  sim->add_option("--out", o.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const srp::RunConfig cfg = resolve(o);
    std::string report;
    if (*pre) {
      report = srp::cmd_precompute(cfg, pick(o.cache, cfg.cache_path, "cache path"));
    } else if (*map) {
      std::optional<std::filesystem::path> cache;
      if (!o.cache.empty()) cache = o.cache;
      std::optional<srp::Point3> truth;
      if (o.truth.size() == 3) truth = srp::Point3(o.truth[0], o.truth[1], o.truth[2]);
      report = srp::cmd_map(cfg, o.audio, cache, truth, pick(o.out, cfg.out_path, "output path"));
    } else if (*sweep) {
      report = srp::cmd_sweep(cfg, pick(o.out, cfg.out_path, "output path"));
    } else {
      report = srp::cmd_simulate(cfg, pick(o.out, cfg.out_path, "output directory"));
    }
    std::fputs(report.c_str(), stdout);
  } catch (const srp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
