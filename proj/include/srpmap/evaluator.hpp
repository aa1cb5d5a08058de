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
#include <string>

#include "srpmap/sampler.hpp"
#include "srpmap/scene.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

enum class Method { Conventional, LowRank, SamplingInterp, SamplingLowRankInterp, SamplingSparseInterp };

// Short tags: conv, lr, si, slri, sspi.
const char* to_string(Method method);
Method parse_method(const std::string& tag);

struct CostParams {
  std::int64_t candidates = 0;    // J
  std::int64_t pairs = 0;         // P
  std::int64_t half = 0;          // K
  std::int64_t sample_count = 0;  // P N = sum_p (2 N_p + 1)
  std::int64_t rank_h = 0;        // R_H
  std::int64_t rank_lambda = 0;   // R_Lambda
  std::int64_t sparsity = 0;      // Q_Lambda
  SamplingPath path = SamplingPath::Auto;

  double mean_samples() const { return pairs > 0 ? static_cast<double>(sample_count) / pairs : 0.0; }
  // P N is an integer by construction, so the mean is rounded onto it.
  static CostParams from_mean_samples(std::int64_t J, std::int64_t P, std::int64_t K, double N);
};

// Multiplication counts. Values are exact for integers below 2^53; the
// iFFT term 8PK log2(2K) is fractional when 2K is not a power of two.
struct CostReport {
  Method method = Method::Conventional;
  CostParams params;
  SamplingPath resolved_path = SamplingPath::Matrix;
  double count = 0.0;
  double baseline = 0.0;  // C = 2JP(K-1)
  double relative = 0.0;  // count / baseline
};

double conventional_cost(std::int64_t J, std::int64_t P, std::int64_t K);
// True when N > 4 K / (K-1) log2(2K).
bool ifft_is_cheaper(double mean_samples, std::int64_t K);
SamplingPath resolve_path(SamplingPath path, double mean_samples, std::int64_t K);
// 2 P N (K-1) for the matrix path, 8 P K log2(2K) for the iFFT path.
double sampling_cost(const CostParams& params, SamplingPath resolved);

CostReport cost(Method method, const CostParams& params);

// 10 log10(|A - B|_F^2 / |B|_F^2). Returns -infinity when A == B and throws
// DimensionError for mismatched shapes or Error when |B| = 0.
double matrix_error(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& reference);
double map_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& reference);
// Same metric for a rank-R truncation, from the singular values alone.
double tail_error_db(const Eigen::VectorXd& singular_values, Eigen::Index rank);

// Lambda-like J x PN matrix times the block-diagonal sampling matrix,
// giving the J x P(K-1) SRP matrix it implies.
Eigen::MatrixXcd lift_interp(const Eigen::MatrixXd& lambda, const SampleSpec& spec);

// Near field: Euclidean distance (m). Far field: angle (rad) between unit
// vectors, dot product clamped to [-1, 1].
double loc_error(const Point3& estimate, const Point3& truth, Field field);

inline constexpr double kDefaultSharpness = 6.0;
// 0.2 m near field, 2.5 degrees (in radians) far field.
double default_threshold(Field field);

// 1 / (1 + exp(sigma (err - thr) / thr)).
double loc_accuracy(double error, double threshold, double sigma = kDefaultSharpness);

struct LocResult {
  Eigen::Index index = 0;
  Point3 estimate = Point3::Zero();
  double error = 0.0;           // meters or radians
  double error_reported = 0.0;  // meters or degrees
  double accuracy = 0.0;
};

LocResult evaluate_location(const SrpMap& z, const CandidateGrid& grid, const Point3& truth,
                            double threshold, double sigma = kDefaultSharpness);

}  // namespace srp
