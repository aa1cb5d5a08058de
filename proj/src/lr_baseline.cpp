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

#include "srpmap/lr_baseline.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <string>

#include "srpmap/error.hpp"

namespace srp {

namespace {

void check_rank(Eigen::Index rank, Eigen::Index max_rank) {
  if (rank < 1 || rank > max_rank) {
    throw ConfigError("SRP matrix rank " + std::to_string(rank) + " outside [1, " + std::to_string(max_rank) + "]");
  }
}

}  // namespace

LowRankSrp truncate_srp_matrix(const SrpMatrix& srp, Eigen::Index rank) {
  check_rank(rank, std::min(srp.H.rows(), srp.H.cols()));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(srp.H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LowRankSrp lr;
  lr.pairs = srp.pairs;
  lr.bins = srp.bins;
  lr.singular_values = svd.singularValues();
  lr.tall = svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).cast<std::complex<double>>().asDiagonal();
  lr.fat = svd.matrixV().leftCols(rank).adjoint();
  return lr;
}

LowRankSrp retruncate(const LowRankSrp& full, Eigen::Index rank) {
  check_rank(rank, full.rank());
  LowRankSrp lr;
  lr.pairs = full.pairs;
  lr.bins = full.bins;
  lr.singular_values = full.singular_values;
  lr.tall = full.tall.leftCols(rank);
  lr.fat = full.fat.topRows(rank);
  return lr;
}

SrpMap lr_map(const LowRankSrp& lr, const FdGcc& gcc) {
  if (gcc.psi.size() != lr.fat.cols()) throw DimensionError("FD GCC length does not match H_fat");
  const Eigen::VectorXcd inner = lr.fat * gcc.psi;
  return 2.0 * (lr.tall * inner).real();
}

}  // namespace srp
