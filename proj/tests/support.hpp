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

// Shared fixtures for the unit tests.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "srpmap/config.hpp"
#include "srpmap/frontend.hpp"
#include "srpmap/scene.hpp"

namespace srp::testing {

inline Eigen::VectorXcd random_complex(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline Eigen::MatrixXd random_real(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

inline FdGcc random_gcc(int pairs, int bins, std::mt19937_64& rng) {
  FdGcc g;
  g.pairs = pairs;
  g.bins = bins;
  g.psi = random_complex(static_cast<Eigen::Index>(pairs) * bins, rng);
  return g;
}

// A J x P table of uniformly drawn TDOAs within the given per-pair limits.
inline TdoaTable random_tdoa(Eigen::Index J, const Eigen::VectorXd& limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TdoaTable t;
  t.limit = limit;
  t.delta.resize(J, limit.size());
  for (Eigen::Index p = 0; p < limit.size(); ++p) {
    for (Eigen::Index i = 0; i < J; ++i) t.delta(i, p) = u(rng) * limit(p);
  }
  return t;
}

template <typename A, typename B>
double rel_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).norm() / b.norm();
}

// The near-field desk configuration: four corner microphones, a 7 x 7 x 2
// grid below them, 4 kHz and 2K = 512.
inline std::string nf_mini_json(const std::string& scenario_extra = "", const std::string& top_extra = "") {
  return R"({
  "scenario": {
    "field": "near",
    "room": [4.9, 5.9, 3.5],
    "array": {"positions": [[0.45, 0.45, 3.0], [4.45, 0.45, 3.0], [4.45, 5.45, 3.0], [0.45, 5.45, 3.0]]},
    "grid": {"origin": [1.0, 1.5, 1.4], "extent": [0.6, 0.6, 0.1], "resolution": 0.1},
    "snr_db": "inf",
    "placements": 4,
    "frames": 2,
    "seed": 5)" + scenario_extra + R"(
  },
  "pipeline": {"sample_rate": 4000, "frame_length": 512}
  )" + top_extra + "}";
}

// The far-field desk configuration: six microphones on a 0.3 m circle, a
// 10 degree hemisphere grid, 16 kHz and 2K = 1024.
inline std::string ff_mini_json(const std::string& scenario_extra = "", const std::string& top_extra = "") {
  return R"({
  "scenario": {
    "field": "far",
    "array": {"circular": {"center": [0, 0, 0], "radius": 0.3, "count": 6}},
    "grid": {"resolution_deg": 10},
    "snr_db": "inf",
    "placements": 4,
    "frames": 2,
    "seed": 9)" + scenario_extra + R"(
  },
  "pipeline": {"sample_rate": 16000, "frame_length": 1024}
  )" + top_extra + "}";
}

}  // namespace srp::testing
