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

#include <cmath>
#include <random>

#include "doctest.h"
#include "srpmap/error.hpp"
#include "srpmap/evaluator.hpp"
#include "srpmap/lr_baseline.hpp"
#include "support.hpp"

using namespace srp;

namespace {

SrpMatrix random_srp(std::uint64_t seed, Eigen::Index J = 24, int bins = 15) {
  std::mt19937_64 rng(seed);
  const FrameSpec f{2 * (bins + 1), 8000.0, 0};
  return build_srp_matrix(testing::random_tdoa(J, Eigen::Vector2d(1e-3, 6e-4), rng), f);
}

SrpMatrix dense_random(Eigen::Index rows, int pairs, int bins, std::mt19937_64& rng) {
  SrpMatrix s;
  s.pairs = pairs;
  s.bins = bins;
  s.H.resize(rows, static_cast<Eigen::Index>(pairs) * bins);
  for (Eigen::Index c = 0; c < s.H.cols(); ++c) s.H.col(c) = testing::random_complex(rows, rng);
  return s;
}

}  // namespace

TEST_CASE("full-rank truncation reproduces H") {
  const SrpMatrix h = random_srp(1);
  const LowRankSrp lr = truncate_srp_matrix(h, 24);
  CHECK(testing::rel_diff(lr.dense(), h.H) < 1e-10);
  CHECK_THROWS_AS(truncate_srp_matrix(h, 0), ConfigError);
  CHECK_THROWS_AS(truncate_srp_matrix(h, 25), ConfigError);
}

TEST_CASE("a replicated row is captured by rank one") {
  std::mt19937_64 rng(2);
  SrpMatrix h = random_srp(2, 10);
  for (Eigen::Index i = 1; i < h.H.rows(); ++i) h.H.row(i) = h.H.row(0);
  const LowRankSrp lr = truncate_srp_matrix(h, 1);
  CHECK((lr.dense() - h.H).norm() < 1e-12 * h.H.norm());
}

TEST_CASE("truncation residual equals the singular-value tail") {
  std::mt19937_64 rng(3);
  const SrpMatrix h = dense_random(24, 2, 15, rng);  // 24 x 30
  const LowRankSrp lr = truncate_srp_matrix(h, 6);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(h.H).singularValues();
  const double tail = sv.tail(sv.size() - 6).squaredNorm();
  CHECK(std::abs((lr.dense() - h.H).squaredNorm() - tail) < 1e-9 * tail);
  CHECK(tail_error_db(lr.singular_values, 6) == doctest::Approx(10.0 * std::log10(tail / sv.squaredNorm())));
}

TEST_CASE("truncated SVD of H beats random low-rank probes") {
  std::mt19937_64 rng(4);
  const SrpMatrix h = random_srp(5);
  const LowRankSrp full = truncate_srp_matrix(h, 24);
  for (Eigen::Index r : {1, 3, 6}) {
    const LowRankSrp opt = retruncate(full, r);
    const double best = (opt.dense() - h.H).norm();
    for (int probe = 0; probe < 20; ++probe) {
      Eigen::MatrixXcd a(h.H.rows(), r);
      for (Eigen::Index c = 0; c < r; ++c) a.col(c) = testing::random_complex(h.H.rows(), rng);
      CHECK(best <= ((opt.tall + 0.01 * a) * opt.fat - h.H).norm() + 1e-12);
    }
  }
}

TEST_CASE("retruncation matches a direct truncation") {
  const SrpMatrix h = random_srp(6);
  const LowRankSrp full = truncate_srp_matrix(h, 24);
  const LowRankSrp a = retruncate(full, 5);
  const LowRankSrp b = truncate_srp_matrix(h, 5);
  CHECK(testing::rel_diff(a.dense(), b.dense()) < 1e-10);
}

TEST_CASE("low-rank map cascade") {
  std::mt19937_64 rng(7);
  const SrpMatrix h = random_srp(8);
  const FdGcc g = testing::random_gcc(2, 15, rng);
  FdGcc zero = g;
  zero.psi.setZero();
  const LowRankSrp lr4 = truncate_srp_matrix(h, 4);
  CHECK(lr_map(lr4, zero).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd dense = 2.0 * (lr4.dense() * g.psi).real();
  CHECK(testing::rel_diff(lr_map(lr4, g), dense) < 1e-12);
  const LowRankSrp full = truncate_srp_matrix(h, 24);
  CHECK(testing::rel_diff(lr_map(full, g), srp_map_exact(h, g)) < 1e-9);
  FdGcc bad = g;
  bad.psi.resize(3);
  CHECK_THROWS_AS(lr_map(lr4, bad), DimensionError);
}

TEST_CASE("low-rank map is linear in the GCC") {
  std::mt19937_64 rng(9);
  const LowRankSrp lr = truncate_srp_matrix(random_srp(10), 5);
  const FdGcc a = testing::random_gcc(2, 15, rng);
  const FdGcc b = testing::random_gcc(2, 15, rng);
  FdGcc sum = a;
  sum.psi = 2.0 * a.psi - 0.5 * b.psi;
  CHECK(testing::rel_diff(lr_map(lr, sum), 2.0 * lr_map(lr, a) - 0.5 * lr_map(lr, b)) < 1e-12);
}
