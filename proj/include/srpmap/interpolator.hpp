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
#include <vector>

#include "srpmap/frontend.hpp"
#include "srpmap/sampler.hpp"
#include "srpmap/scene.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Normalized sinc, sin(pi x) / (pi x) with sinc(0) = 1.
double sinc(double x);

// Lambda = [Lambda_1 ... Lambda_P], [Lambda_p]_{i, slot(n)} = sinc(dt_p(i) / T - n).
struct InterpMatrix {
  SampleSpec spec;
  RowMatrixXd lambda;  // J x PN
};

InterpMatrix build_interp_matrix(const TdoaTable& tdoa, const SampleSpec& spec, const FrameSpec& frame,
                                 std::size_t memory_cap = kDefaultMemoryCap);

// z_si = Lambda xi, accumulated row by row in column order.
SrpMap si_map(const InterpMatrix& interp, const TdGccSamples& samples);

// Rank-R factorization Lambda_tall * Lambda_fat from the SVD of Lambda,
// Lambda_tall = U Sigma (leading R), Lambda_fat = V^T.
struct LowRankInterp {
  SampleSpec spec;
  Eigen::MatrixXd tall;              // J x R
  Eigen::MatrixXd fat;               // R x PN
  Eigen::VectorXd singular_values;   // all of them, descending

  Eigen::Index rank() const { return tall.cols(); }
  Eigen::MatrixXd dense() const { return tall * fat; }
};

// Throws ConfigError unless 1 <= rank <= min(J, PN).
LowRankInterp truncate_low_rank(const InterpMatrix& interp, Eigen::Index rank);
LowRankInterp truncate_low_rank(const Eigen::MatrixXd& lambda, const SampleSpec& spec, Eigen::Index rank);
// Drops trailing triplets of an existing factorization.
LowRankInterp retruncate(const LowRankInterp& full, Eigen::Index rank);

// z_slri = Lambda_tall (Lambda_fat xi).
SrpMap slri_map(const LowRankInterp& lr, const TdGccSamples& samples);

// Compressed sparse rows.
struct CsrMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::int64_t> row_ptr;  // rows + 1
  std::vector<std::int64_t> col_idx;
  std::vector<double> values;

  std::size_t nonzeros() const { return values.size(); }
  Eigen::MatrixXd dense() const;
  // y = A x, each row accumulated in ascending column order.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
};

struct SparseInterp {
  SampleSpec spec;
  CsrMatrix lambda;
};

// Keeps the Q largest-magnitude entries of Lambda over the whole matrix.
// Equal magnitudes resolve in row-major order (lower row, then lower column).
// Q is clamped to J * PN.
SparseInterp truncate_sparse(const InterpMatrix& interp, std::int64_t keep);
CsrMatrix keep_largest(const RowMatrixXd& dense, std::int64_t keep);

// z_sspi = Lambda_sp xi.
SrpMap sspi_map(const SparseInterp& sp, const TdGccSamples& samples);

}  // namespace srp
