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
#include <numbers>
#include <random>

#include "doctest.h"
#include "srpmap/error.hpp"
#include "srpmap/sampler.hpp"
#include "support.hpp"

using namespace srp;
using cd = std::complex<double>;

namespace {

TdoaTable limits_only(const Eigen::VectorXd& limit) {
  TdoaTable t;
  t.limit = limit;
  t.delta = Eigen::MatrixXd::Zero(1, limit.size());
  return t;
}

}  // namespace

TEST_CASE("half-width for a 6.4 m pair at 4 kHz") {
  const SampleSpec s = sample_spec(limits_only(Eigen::VectorXd::Constant(1, 6.4 / 340.0)), {512, 4000.0, 0}, 2);
  CHECK(s.half_widths[0] == 77);
  CHECK(s.width(0) == 155);
}

TEST_CASE("mean sample count of the hexagonal far-field array") {
  const MicrophoneArray a = make_circular_array({0, 0, 0}, 0.3, 6);
  const PairTable pairs = enumerate_pairs(a);
  const TdoaTable t = tdoa_table(a, pairs, build_hemisphere_grid({10.0}));
  const SampleSpec s = sample_spec(t, {1024, 16000.0, 0}, 2);
  int sum = 0;
  for (int n : s.half_widths) sum += n;
  CHECK(sum == 342);
  CHECK(s.mean_samples() == doctest::Approx(46.6).epsilon(1e-15));
  CHECK(s.total() == 699);
}

TEST_CASE("a limit below one sample with no auxiliary samples keeps one sample") {
  const SampleSpec s = sample_spec(limits_only(Eigen::VectorXd::Constant(2, 0.9 / 1000.0)), {16, 1000.0, 0}, 0);
  CHECK(s.half_widths == std::vector<int>{0, 0});
  CHECK(s.total() == 2);
  CHECK(s.mean_samples() == 1.0);
}

TEST_CASE("half-widths that do not fit the frame are rejected") {
  CHECK_THROWS_AS(sample_spec(limits_only(Eigen::VectorXd::Constant(1, 0.01)), {16, 1000.0, 0}, 0), ConfigError);
  CHECK_THROWS_AS(sample_spec_from_widths({8}, 8, 0), ConfigError);
  CHECK_NOTHROW(sample_spec_from_widths({7}, 8, 0));
}

TEST_CASE("slot maps wrap negative lags") {
  CHECK(sample_slot(0, 2) == 0);
  CHECK(sample_slot(2, 2) == 2);
  CHECK(sample_slot(-1, 2) == 4);
  CHECK(sample_slot(-2, 2) == 3);
  CHECK(ifft_slot(-1, 8) == 15);
  CHECK(ifft_slot(3, 8) == 3);
}

TEST_CASE("a unit GCC bin samples to a cosine on both paths") {
  const int K = 16;
  const int k0 = 3;
  const SampleSpec spec = sample_spec_from_widths({4}, K, 0);
  FdGcc g;
  g.pairs = 1;
  g.bins = K - 1;
  g.psi = Eigen::VectorXcd::Zero(K - 1);
  g.psi(k0 - 1) = 1.0;
  for (auto path : {SamplingPath::Matrix, SamplingPath::Ifft}) {
    const TdGccSamples xi = td_gcc_samples(g, spec, path);
    for (int n = -4; n <= 4; ++n) {
      CHECK(xi.xi(sample_slot(n, 4)) == doctest::Approx(2.0 * std::cos(std::numbers::pi * k0 * n / K)));
    }
  }
}

TEST_CASE("matrix and iFFT paths agree on random GCCs") {
  std::mt19937_64 rng(7);
  const SampleSpec spec = sample_spec_from_widths({2, 3, 4}, 16, 0);
  TdGccSampler sampler(spec);
  for (int trial = 0; trial < 20; ++trial) {
    const FdGcc g = testing::random_gcc(3, 15, rng);
    const Eigen::VectorXd a = sampler.sample(g, SamplingPath::Matrix).xi;
    const Eigen::VectorXd b = sampler.sample(g, SamplingPath::Ifft).xi;
    CHECK(a.size() == spec.total());
    CHECK(testing::rel_diff(a, b) < 1e-12);
  }
  CHECK_THROWS_AS(sampler.sample(testing::random_gcc(3, 15, rng), SamplingPath::Auto), ConfigError);
  CHECK_THROWS_AS(sampler.sample(testing::random_gcc(2, 15, rng), SamplingPath::Matrix), DimensionError);
}

TEST_CASE("zero GCC samples to zero") {
  const SampleSpec spec = sample_spec_from_widths({1, 2}, 8, 0);
  FdGcc g;
  g.pairs = 2;
  g.bins = 7;
  g.psi = Eigen::VectorXcd::Zero(14);
  for (auto path : {SamplingPath::Matrix, SamplingPath::Ifft}) {
    CHECK(td_gcc_samples(g, spec, path).xi.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("samples equal 2 Re of the dense sampling matrix product") {
  std::mt19937_64 rng(8);
  const SampleSpec spec = sample_spec_from_widths({2, 0, 5}, 8, 0);
  const FdGcc g = testing::random_gcc(3, 7, rng);
  const Eigen::MatrixXcd S = dense_sampling_matrix(spec);
  CHECK(S.rows() == spec.total());
  CHECK(S.cols() == 21);
  const Eigen::VectorXd want = 2.0 * (S * g.psi).real();
  CHECK(testing::rel_diff(td_gcc_samples(g, spec, SamplingPath::Ifft).xi, want) < 1e-12);
}

TEST_CASE("two-sided GCC is conjugate-symmetric with empty DC and Nyquist bins") {
  std::mt19937_64 rng(9);
  const int K = 8;
  const FdGcc g = testing::random_gcc(2, K - 1, rng);
  const Eigen::VectorXcd bar = two_sided_psi(g);
  REQUIRE(bar.size() == 2 * 2 * K);
  for (int p = 0; p < 2; ++p) {
    const auto blk = bar.segment(p * 2 * K, 2 * K);
    CHECK(blk(0) == cd(0.0, 0.0));
    CHECK(blk(K) == cd(0.0, 0.0));
    for (int k = 1; k < K; ++k) {
      CHECK(blk(k) == g.pair(p)(k - 1));
      CHECK(blk(2 * K - k) == std::conj(blk(k)));
    }
  }
}

TEST_CASE("two-sided sampling rows are orthogonal") {
  const int K = 8;
  const SampleSpec spec = sample_spec_from_widths({2, 2}, K, 0);
  const Eigen::MatrixXcd Sb = two_sided_sampling_matrix(spec);
  const Eigen::MatrixXcd gram = Sb * Sb.adjoint();
  const Eigen::MatrixXcd want = 2.0 * K * Eigen::MatrixXcd::Identity(spec.total(), spec.total());
  CHECK((gram - want).norm() / want.norm() < 1e-10);
}

TEST_CASE("two-sided sampling rows are rows of the inverse DFT") {
  const int K = 8;
  const SampleSpec spec = sample_spec_from_widths({3}, K, 0);
  const Eigen::MatrixXcd Sb = two_sided_sampling_matrix(spec);
  for (int n = -3; n <= 3; ++n) {
    const int row = sample_slot(n, 3);
    const int nm = ifft_slot(n, K);
    for (int c = 0; c < 2 * K; ++c) {
      CHECK(std::abs(Sb(row, c) - std::polar(1.0, 2.0 * std::numbers::pi * c * nm / (2.0 * K))) < 1e-12);
    }
  }
}

TEST_CASE("single- and two-sided formulations agree") {
  std::mt19937_64 rng(10);
  const FrameSpec f{16, 8000.0, 0};
  const TdoaTable t = testing::random_tdoa(12, Eigen::Vector3d(3e-4, 5e-4, 2e-4), rng);
  const SampleSpec spec = sample_spec(t, f, 1);
  const FdGcc g = testing::random_gcc(3, 7, rng);
  const Eigen::VectorXcd bar = two_sided_psi(g);
  const SrpMatrix H = build_srp_matrix(t, f);
  const Eigen::VectorXcd hz = two_sided_srp_matrix(t, f) * bar;
  const Eigen::VectorXd z = srp_map_exact(H, g);
  CHECK(hz.imag().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(testing::rel_diff(hz.real(), z) < 1e-12);
  const Eigen::VectorXcd sx = two_sided_sampling_matrix(spec) * bar;
  CHECK(sx.imag().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(testing::rel_diff(sx.real(), td_gcc_samples(g, spec, SamplingPath::Matrix).xi) < 1e-12);
}
