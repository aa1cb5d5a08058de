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

#include "srpmap/frontend.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

// Rank-R_H factorization H_tall * H_fat of the SRP matrix, H_tall = U Sigma
// and H_fat = V^H over the leading singular triplets.
struct LowRankSrp {
  int pairs = 0;
  int bins = 0;
  Eigen::MatrixXcd tall;             // J x R_H
  Eigen::MatrixXcd fat;              // R_H x P(K-1)
  Eigen::VectorXd singular_values;   // all of them, descending

  Eigen::Index rank() const { return tall.cols(); }
  Eigen::MatrixXcd dense() const { return tall * fat; }
};

// Throws ConfigError unless 1 <= rank <= min(J, P(K-1)).
LowRankSrp truncate_srp_matrix(const SrpMatrix& srp, Eigen::Index rank);

// Reuses singular triplets of an earlier decomposition for a smaller rank.
LowRankSrp retruncate(const LowRankSrp& full, Eigen::Index rank);

// z_lr = 2 Re[H_tall (H_fat psi)].
SrpMap lr_map(const LowRankSrp& lr, const FdGcc& gcc);

}  // namespace srp
