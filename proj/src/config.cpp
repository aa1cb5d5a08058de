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

#include "srpmap/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "srpmap/error.hpp"

namespace srp {

using nlohmann::json;

Budget Budget::parse(const std::string& text) {
  Budget b;
  if (text == "full" || text == "all") return b;
  try {
    std::size_t used = 0;
    if (text.size() > 2 && text.substr(text.size() - 2) == "JP") {
      b.kind = Kind::PerCandidatePair;
      b.value = std::stod(text.substr(0, text.size() - 2), &used);
      if (used != text.size() - 2) throw ConfigError("");
    } else {
      b.kind = Kind::Absolute;
      b.value = std::stod(text, &used);
      if (used != text.size()) throw ConfigError("");
    }
  } catch (const std::exception&) {
    throw ConfigError("cannot parse budget '" + text + "' (expected a count, '<x>JP', 'full' or 'all')");
  }
  if (!(b.value >= 0.0) || !std::isfinite(b.value)) throw ConfigError("budget '" + text + "' must be >= 0");
  return b;
}

std::string Budget::label() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind) {
    case Kind::Full:
      return "full";
    case Kind::Absolute:
      os << value;
      return os.str();
    case Kind::PerCandidatePair:
      os << value << "JP";
      return os.str();
  }
  return "?";
}

std::int64_t Budget::resolve(std::int64_t candidates, std::int64_t pairs, std::int64_t full) const {
  double v = static_cast<double>(full);
  if (kind == Kind::Absolute) v = value;
  if (kind == Kind::PerCandidatePair) v = value * static_cast<double>(candidates) * static_cast<double>(pairs);
  return std::min<std::int64_t>(full, std::llround(v));
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + where + "." + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError("'" + what + "' must be a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError("'" + what + "' must be an integer");
  return v.get<long long>();
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError("'" + what + "' must be a string");
  return v.get<std::string>();
}

Point3 point(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("'" + what + "' must be a 3-element array");
  return {number(v[0], what), number(v[1], what), number(v[2], what)};
}

Budget budget(const json& v, const std::string& what) {
  if (v.is_string()) return Budget::parse(v.get<std::string>());
  if (v.is_number()) {
    Budget b;
    b.kind = Budget::Kind::Absolute;
    b.value = v.get<double>();
    if (!(b.value >= 0.0)) throw ConfigError("'" + what + "' must be >= 0");
    return b;
  }
  throw ConfigError("'" + what + "' must be a number or a string");
}

std::vector<Budget> budget_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError("'" + what + "' must be an array");
  std::vector<Budget> out;
  for (const auto& item : v) out.push_back(budget(item, what));
  return out;
}

SamplingPath parse_path(const std::string& s) {
  if (s == "matrix") return SamplingPath::Matrix;
  if (s == "ifft") return SamplingPath::Ifft;
  if (s == "auto") return SamplingPath::Auto;
  throw ConfigError("unknown sampling path '" + s + "' (expected matrix, ifft or auto)");
}

MicrophoneArray parse_array(const json& a) {
  check_keys(a, "scenario.array", {"positions", "circular", "speed_of_sound"});
  MicrophoneArray array;
  if (a.contains("speed_of_sound")) array.speed_of_sound = number(a["speed_of_sound"], "scenario.array.speed_of_sound");
  if (a.contains("positions") == a.contains("circular")) {
    throw ConfigError("'scenario.array' needs exactly one of 'positions' or 'circular'");
  }
  if (a.contains("positions")) {
    const auto& list = a["positions"];
    if (!list.is_array()) throw ConfigError("'scenario.array.positions' must be an array");
    for (const auto& p : list) array.positions.push_back(point(p, "scenario.array.positions"));
  } else {
    const auto& c = a["circular"];
    check_keys(c, "scenario.array.circular", {"center", "radius", "count"});
    const double c0 = array.speed_of_sound;
    array = make_circular_array(point(require(c, "scenario.array.circular", "center"), "scenario.array.circular.center"),
                                number(require(c, "scenario.array.circular", "radius"), "scenario.array.circular.radius"),
                                static_cast<int>(integer(require(c, "scenario.array.circular", "count"),
                                                         "scenario.array.circular.count")),
                                c0);
  }
  try {
    array.validate();
  } catch (const InvalidGeometry& e) {
    throw ConfigError(std::string("scenario.array: ") + e.what());
  }
  return array;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RunConfig parse_run_config(const std::string& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config", {"scenario", "pipeline", "method", "sweep", "output", "workers", "memory_cap_mb"});
  RunConfig cfg;

  const json& pl = require(root, "config", "pipeline");
  check_keys(pl, "pipeline", {"sample_rate", "frame_length", "hop", "weighting", "n_aux", "phat_floor"});
  cfg.pipeline.frame.sample_rate = number(require(pl, "pipeline", "sample_rate"), "pipeline.sample_rate");
  cfg.pipeline.frame.frame_length = static_cast<int>(integer(require(pl, "pipeline", "frame_length"), "pipeline.frame_length"));
  if (pl.contains("hop")) {
    cfg.pipeline.frame.hop = static_cast<int>(integer(pl["hop"], "pipeline.hop"));
    if (cfg.pipeline.frame.hop < 1) throw ConfigError("'pipeline.hop' must be >= 1");
  }
  if (pl.contains("weighting")) {
    const std::string w = text(pl["weighting"], "pipeline.weighting");
    if (w == "phat") {
      cfg.pipeline.weighting = Weighting::Phat;
    } else if (w == "none") {
      cfg.pipeline.weighting = Weighting::Unweighted;
    } else {
      throw ConfigError("unknown weighting '" + w + "' (expected phat or none)");
    }
  }
  if (pl.contains("n_aux")) cfg.pipeline.aux = static_cast<int>(integer(pl["n_aux"], "pipeline.n_aux"));
  if (cfg.pipeline.aux < 0) throw ConfigError("'pipeline.n_aux' must be >= 0");
  if (pl.contains("phat_floor")) cfg.pipeline.phat_floor = number(pl["phat_floor"], "pipeline.phat_floor");
  try {
    cfg.pipeline.frame.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("pipeline: ") + e.what());
  }

  const json& sc = require(root, "config", "scenario");
  check_keys(sc, "scenario",
             {"field", "room", "array", "grid", "source", "reflection_order", "absorption", "snr_db", "placements",
              "frames", "on_grid", "min_range", "max_range", "seed"});
  ScenarioConfig& s = cfg.scenario;
  const std::string field = text(require(sc, "scenario", "field"), "scenario.field");
  if (field == "near") {
    s.field = Field::Near;
  } else if (field == "far") {
    s.field = Field::Far;
  } else {
    throw ConfigError("'scenario.field' must be near or far");
  }
  if (sc.contains("room")) s.room = point(sc["room"], "scenario.room");
  s.array = parse_array(require(sc, "scenario", "array"));
  const json& grid = require(sc, "scenario", "grid");
  if (s.field == Field::Near) {
    check_keys(grid, "scenario.grid", {"origin", "extent", "resolution"});
    s.volume.origin = point(require(grid, "scenario.grid", "origin"), "scenario.grid.origin");
    s.volume.extent = point(require(grid, "scenario.grid", "extent"), "scenario.grid.extent");
    s.volume.resolution = number(require(grid, "scenario.grid", "resolution"), "scenario.grid.resolution");
  } else {
    check_keys(grid, "scenario.grid", {"resolution_deg"});
    s.hemisphere.resolution_deg = number(require(grid, "scenario.grid", "resolution_deg"), "scenario.grid.resolution_deg");
  }
  if (sc.contains("source")) {
    const json& src = sc["source"];
    check_keys(src, "scenario.source", {"signal", "file"});
    const std::string kind = text(require(src, "scenario.source", "signal"), "scenario.source.signal");
    if (kind == "pink") {
      s.source.kind = SignalKind::Pink;
    } else if (kind == "white") {
      s.source.kind = SignalKind::White;
    } else if (kind == "file") {
      s.source.kind = SignalKind::File;
      s.source.file = text(require(src, "scenario.source", "file"), "scenario.source.file");
    } else {
      throw ConfigError("'scenario.source.signal' must be pink, white or file");
    }
  }
  if (sc.contains("reflection_order")) s.reflection_order = static_cast<int>(integer(sc["reflection_order"], "scenario.reflection_order"));
  if (sc.contains("absorption")) s.absorption = number(sc["absorption"], "scenario.absorption");
  if (sc.contains("snr_db")) {
    const json& v = sc["snr_db"];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "inf")) {
      s.snr_db.reset();
    } else {
      s.snr_db = number(v, "scenario.snr_db");
    }
  }
  if (sc.contains("placements")) s.placements = static_cast<int>(integer(sc["placements"], "scenario.placements"));
  if (sc.contains("frames")) cfg.frames = static_cast<int>(integer(sc["frames"], "scenario.frames"));
  if (cfg.frames < 1) throw ConfigError("'scenario.frames' must be >= 1");
  if (sc.contains("on_grid")) {
    if (!sc["on_grid"].is_boolean()) throw ConfigError("'scenario.on_grid' must be a boolean");
    s.on_grid = sc["on_grid"].get<bool>();
  }
  if (sc.contains("min_range")) s.min_range = number(sc["min_range"], "scenario.min_range");
  if (sc.contains("max_range")) s.max_range = number(sc["max_range"], "scenario.max_range");
  if (sc.contains("seed")) {
    if (!sc["seed"].is_number_unsigned()) throw ConfigError("'scenario.seed' must be a non-negative integer");
    s.seed = sc["seed"].get<std::uint64_t>();
  }
  s.sample_rate = cfg.pipeline.frame.sample_rate;
  s.length = cfg.pipeline.frame.frame_length +
             static_cast<Eigen::Index>(cfg.frames - 1) * cfg.pipeline.frame.effective_hop();
  s.validate();

  if (root.contains("method")) {
    const json& m = root["method"];
    check_keys(m, "method", {"name", "rank", "sparsity", "path"});
    cfg.method.method = parse_method(text(require(m, "method", "name"), "method.name"));
    if (m.contains("rank")) cfg.method.rank = budget(m["rank"], "method.rank");
    if (m.contains("sparsity")) cfg.method.sparsity = budget(m["sparsity"], "method.sparsity");
    if (m.contains("path")) cfg.method.path = parse_path(text(m["path"], "method.path"));
  }
  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    check_keys(sw, "sweep", {"lr_ranks", "slri_ranks", "sparsities"});
    if (sw.contains("lr_ranks")) cfg.sweep.lr_ranks = budget_list(sw["lr_ranks"], "sweep.lr_ranks");
    if (sw.contains("slri_ranks")) cfg.sweep.slri_ranks = budget_list(sw["slri_ranks"], "sweep.slri_ranks");
    if (sw.contains("sparsities")) cfg.sweep.sparsities = budget_list(sw["sparsities"], "sweep.sparsities");
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"cache", "out"});
    if (o.contains("cache")) cfg.cache_path = text(o["cache"], "output.cache");
    if (o.contains("out")) cfg.out_path = text(o["out"], "output.out");
  }
  if (root.contains("workers")) cfg.workers = static_cast<int>(integer(root["workers"], "workers"));
  if (cfg.workers < 1) throw ConfigError("'workers' must be >= 1");
  if (root.contains("memory_cap_mb")) {
    const long long mb = integer(root["memory_cap_mb"], "memory_cap_mb");
    if (mb < 1) throw ConfigError("'memory_cap_mb' must be >= 1");
    cfg.memory_cap = static_cast<std::size_t>(mb) << 20;
  }

  json canon;
  canon["field"] = field;
  canon["room"] = {s.room.x(), s.room.y(), s.room.z()};
  canon["c"] = s.array.speed_of_sound;
  for (const auto& p : s.array.positions) canon["mics"].push_back({p.x(), p.y(), p.z()});
  if (s.field == Field::Near) {
    canon["grid"] = {s.volume.origin.x(), s.volume.origin.y(), s.volume.origin.z(), s.volume.extent.x(),
                     s.volume.extent.y(), s.volume.extent.z(), s.volume.resolution};
  } else {
    canon["grid"] = {s.hemisphere.resolution_deg};
  }
  canon["fs"] = cfg.pipeline.frame.sample_rate;
  canon["frame"] = cfg.pipeline.frame.frame_length;
  canon["aux"] = cfg.pipeline.aux;
  cfg.geometry_hash = fnv1a(canon.dump());
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_run_config(os.str());
}

}  // namespace srp
