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

#include "srpmap/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "srpmap/error.hpp"

namespace srp {

const char* to_string(Method method) {
  switch (method) {
    case Method::Conventional:
      return "conv";
    case Method::LowRank:
      return "lr";
    case Method::SamplingInterp:
      return "si";
    case Method::SamplingLowRankInterp:
      return "slri";
    case Method::SamplingSparseInterp:
      return "sspi";
  }
  return "?";
}

Method parse_method(const std::string& tag) {
  if (tag == "conv") return Method::Conventional;
  if (tag == "lr") return Method::LowRank;
  if (tag == "si") return Method::SamplingInterp;
  if (tag == "slri") return Method::SamplingLowRankInterp;
  if (tag == "sspi") return Method::SamplingSparseInterp;
  throw ConfigError("unknown method '" + tag + "' (expected conv, lr, si, slri or sspi)");
}

CostParams CostParams::from_mean_samples(std::int64_t J, std::int64_t P, std::int64_t K, double N) {
  CostParams params;
  params.candidates = J;
  params.pairs = P;
  params.half = K;
  params.sample_count = std::llround(static_cast<double>(P) * N);
  return params;
}

double conventional_cost(std::int64_t J, std::int64_t P, std::int64_t K) {
  return 2.0 * static_cast<double>(J) * static_cast<double>(P) * static_cast<double>(K - 1);
}

bool ifft_is_cheaper(double mean_samples, std::int64_t K) {
  const double k = static_cast<double>(K);
  return mean_samples > 4.0 * k / (k - 1.0) * std::log2(2.0 * k);
}

SamplingPath resolve_path(SamplingPath path, double mean_samples, std::int64_t K) {
  if (path != SamplingPath::Auto) return path;
  return ifft_is_cheaper(mean_samples, K) ? SamplingPath::Ifft : SamplingPath::Matrix;
}

double sampling_cost(const CostParams& params, SamplingPath resolved) {
  const double P = static_cast<double>(params.pairs);
  const double K = static_cast<double>(params.half);
  if (resolved == SamplingPath::Ifft) return 8.0 * P * K * std::log2(2.0 * K);
  return 2.0 * static_cast<double>(params.sample_count) * (K - 1.0);
}

CostReport cost(Method method, const CostParams& params) {
  CostReport report;
  report.method = method;
  report.params = params;
  report.baseline = conventional_cost(params.candidates, params.pairs, params.half);
  report.resolved_path = resolve_path(params.path, params.mean_samples(), params.half);
  const double J = static_cast<double>(params.candidates);
  const double P = static_cast<double>(params.pairs);
  const double K = static_cast<double>(params.half);
  const double PN = static_cast<double>(params.sample_count);
  const double samp = sampling_cost(params, report.resolved_path);
  switch (method) {
    case Method::Conventional:
      report.count = report.baseline;
      break;
    case Method::LowRank: {
      const double R = static_cast<double>(params.rank_h);
      report.count = 2.0 * J * R + 4.0 * R * P * (K - 1.0);
      break;
    }
    case Method::SamplingInterp:
      report.count = J * PN + samp;
      break;
    case Method::SamplingLowRankInterp: {
      const double R = static_cast<double>(params.rank_lambda);
      report.count = J * R + R * PN + samp;
      break;
    }
    case Method::SamplingSparseInterp:
      report.count = static_cast<double>(params.sparsity) + samp;
      break;
  }
  if (method == Method::Conventional || method == Method::LowRank) report.resolved_path = SamplingPath::Auto;
  report.relative = report.baseline > 0.0 ? report.count / report.baseline : 0.0;
  return report;
}

namespace {

double ratio_db(double residual, double reference) {
  if (!(reference > 0.0)) throw Error("reference has zero norm; relative error is undefined");
  if (residual == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(residual / reference);
}

}  // namespace

double matrix_error(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& reference) {
  if (approx.rows() != reference.rows() || approx.cols() != reference.cols()) {
    throw DimensionError("matrix error operands differ in shape");
  }
  return ratio_db((approx - reference).squaredNorm(), reference.squaredNorm());
}

double map_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& reference) {
  if (approx.size() != reference.size()) throw DimensionError("map error operands differ in length");
  return ratio_db((approx - reference).squaredNorm(), reference.squaredNorm());
}

double tail_error_db(const Eigen::VectorXd& singular_values, Eigen::Index rank) {
  rank = std::clamp<Eigen::Index>(rank, 0, singular_values.size());
  const double tail = singular_values.tail(singular_values.size() - rank).squaredNorm();
  return ratio_db(tail, singular_values.squaredNorm());
}

Eigen::MatrixXcd lift_interp(const Eigen::MatrixXd& lambda, const SampleSpec& spec) {
  if (lambda.cols() != spec.total()) throw DimensionError("interpolation matrix width does not match sample spec");
  const int K = spec.half;
  const int bins = K - 1;
  Eigen::MatrixXcd out(lambda.rows(), static_cast<Eigen::Index>(spec.pairs()) * bins);
  Eigen::MatrixXcd block;
  for (int p = 0; p < spec.pairs(); ++p) {
    const int np = spec.half_widths[static_cast<std::size_t>(p)];
    block.setZero(spec.width(p), bins);
    for (int n = -np; n <= np; ++n) {
      for (int k = 1; k <= bins; ++k) block(sample_slot(n, np), k - 1) = std::polar(1.0, std::numbers::pi * k * n / K);
    }
    out.middleCols(static_cast<Eigen::Index>(p) * bins, bins) =
        lambda.middleCols(spec.offset(p), spec.width(p)).cast<std::complex<double>>() * block;
  }
  return out;
}

double loc_error(const Point3& estimate, const Point3& truth, Field field) {
  if (field == Field::Near) return (estimate - truth).norm();
  return std::acos(std::clamp(estimate.dot(truth), -1.0, 1.0));
}

double default_threshold(Field field) {
  return field == Field::Near ? 0.2 : 2.5 * std::numbers::pi / 180.0;
}

double loc_accuracy(double error, double threshold, double sigma) {
  return 1.0 / (1.0 + std::exp(sigma * (error - threshold) / threshold));
}

LocResult evaluate_location(const SrpMap& z, const CandidateGrid& grid, const Point3& truth, double threshold,
                            double sigma) {
  const Location loc = locate(z, grid);
  LocResult r;
  r.index = loc.index;
  r.estimate = loc.point;
  r.error = loc_error(loc.point, truth, grid.field);
  r.error_reported = grid.field == Field::Far ? r.error * 180.0 / std::numbers::pi : r.error;
  r.accuracy = loc_accuracy(r.error, threshold, sigma);
  return r;
}

}  // namespace srp
