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

#include "srpmap/interpolator.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "srpmap/error.hpp"

namespace srp {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

InterpMatrix build_interp_matrix(const TdoaTable& tdoa, const SampleSpec& spec, const FrameSpec& frame,
                                 std::size_t memory_cap) {
  if (spec.pairs() != tdoa.pairs()) throw DimensionError("sample spec and TDOA table disagree on P");
  if (spec.half != frame.half()) throw DimensionError("sample spec and frame disagree on K");
  check_capacity(tdoa.candidates(), spec.total(), sizeof(double), memory_cap, "interpolation matrix");
  InterpMatrix interp;
  interp.spec = spec;
  interp.lambda.resize(tdoa.candidates(), spec.total());
  const double fs = frame.sample_rate;
  for (Eigen::Index i = 0; i < tdoa.candidates(); ++i) {
    for (int p = 0; p < spec.pairs(); ++p) {
      const int np = spec.half_widths[static_cast<std::size_t>(p)];
      const double lag = tdoa.delta(i, p) * fs;
      for (int n = -np; n <= np; ++n) {
        interp.lambda(i, spec.offset(p) + sample_slot(n, np)) = sinc(lag - n);
      }
    }
  }
  return interp;
}

namespace {

void check_samples(const SampleSpec& spec, const TdGccSamples& samples) {
  if (samples.xi.size() != spec.total()) {
    throw DimensionError("TD GCC sample vector of length " + std::to_string(samples.xi.size()) +
                         " does not match " + std::to_string(spec.total()) + " interpolation columns");
  }
}

}  // namespace

SrpMap si_map(const InterpMatrix& interp, const TdGccSamples& samples) {
  check_samples(interp.spec, samples);
  const Eigen::Index rows = interp.lambda.rows();
  const Eigen::Index cols = interp.lambda.cols();
  SrpMap z(rows);
  const double* xi = samples.xi.data();
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double* row = interp.lambda.data() + i * cols;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) acc += row[j] * xi[j];
    z(i) = acc;
  }
  return z;
}

LowRankInterp truncate_low_rank(const Eigen::MatrixXd& lambda, const SampleSpec& spec, Eigen::Index rank) {
  const Eigen::Index max_rank = std::min(lambda.rows(), lambda.cols());
  if (rank < 1 || rank > max_rank) {
    throw ConfigError("interpolation rank " + std::to_string(rank) + " outside [1, " + std::to_string(max_rank) +
                      "]");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(lambda, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LowRankInterp lr;
  lr.spec = spec;
  lr.singular_values = svd.singularValues();
  lr.tall = svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal();
  lr.fat = svd.matrixV().leftCols(rank).transpose();
  return lr;
}

LowRankInterp truncate_low_rank(const InterpMatrix& interp, Eigen::Index rank) {
  return truncate_low_rank(Eigen::MatrixXd(interp.lambda), interp.spec, rank);
}

LowRankInterp retruncate(const LowRankInterp& full, Eigen::Index rank) {
  if (rank < 1 || rank > full.rank()) {
    throw ConfigError("interpolation rank " + std::to_string(rank) + " outside [1, " + std::to_string(full.rank()) +
                      "]");
  }
  LowRankInterp lr;
  lr.spec = full.spec;
  lr.singular_values = full.singular_values;
  lr.tall = full.tall.leftCols(rank);
  lr.fat = full.fat.topRows(rank);
  return lr;
}

SrpMap slri_map(const LowRankInterp& lr, const TdGccSamples& samples) {
  check_samples(lr.spec, samples);
  const Eigen::VectorXd inner = lr.fat * samples.xi;
  return lr.tall * inner;
}

Eigen::MatrixXd CsrMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (auto e = row_ptr[static_cast<std::size_t>(i)]; e < row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
      out(i, col_idx[static_cast<std::size_t>(e)]) = values[static_cast<std::size_t>(e)];
    }
  }
  return out;
}

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols) throw DimensionError("sparse product dimension mismatch");
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto end = row_ptr[static_cast<std::size_t>(i) + 1];
    double acc = 0.0;
    for (auto e = row_ptr[static_cast<std::size_t>(i)]; e < end; ++e) {
      acc += values[static_cast<std::size_t>(e)] * x(col_idx[static_cast<std::size_t>(e)]);
    }
    y(i) = acc;
  }
  return y;
}

CsrMatrix keep_largest(const RowMatrixXd& dense, std::int64_t keep) {
  const std::int64_t total = static_cast<std::int64_t>(dense.size());
  keep = std::clamp<std::int64_t>(keep, 0, total);
  const double* data = dense.data();

  std::vector<std::int64_t> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), std::int64_t{0});
  // Row-major linear index doubles as the tie-break.
  const auto larger = [data](std::int64_t a, std::int64_t b) {
    const double ma = std::abs(data[a]);
    const double mb = std::abs(data[b]);
    return ma > mb || (ma == mb && a < b);
  };
  if (keep < total) {
    std::nth_element(order.begin(), order.begin() + keep, order.end(), larger);
  }
  order.resize(static_cast<std::size_t>(keep));
  std::sort(order.begin(), order.end());

  CsrMatrix csr;
  csr.rows = dense.rows();
  csr.cols = dense.cols();
  csr.row_ptr.assign(static_cast<std::size_t>(csr.rows) + 1, 0);
  csr.col_idx.reserve(order.size());
  csr.values.reserve(order.size());
  for (const std::int64_t lin : order) {
    const std::int64_t r = lin / csr.cols;
    csr.col_idx.push_back(lin % csr.cols);
    csr.values.push_back(data[lin]);
    ++csr.row_ptr[static_cast<std::size_t>(r) + 1];
  }
  std::partial_sum(csr.row_ptr.begin(), csr.row_ptr.end(), csr.row_ptr.begin());
  return csr;
}

SparseInterp truncate_sparse(const InterpMatrix& interp, std::int64_t keep) {
  return {interp.spec, keep_largest(interp.lambda, keep)};
}

SrpMap sspi_map(const SparseInterp& sp, const TdGccSamples& samples) {
  check_samples(sp.spec, samples);
  return sp.lambda.multiply(samples.xi);
}

}  // namespace srp
