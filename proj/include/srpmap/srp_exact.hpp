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
#include <cstddef>

#include "srpmap/frontend.hpp"
#include "srpmap/scene.hpp"

namespace srp {

// Default upper bound for any dense operator the library materializes.
inline constexpr std::size_t kDefaultMemoryCap = std::size_t{4} << 30;

// Throws CapacityError when rows * cols * element_bytes exceeds cap.
void check_capacity(Eigen::Index rows, Eigen::Index cols, std::size_t element_bytes, std::size_t cap,
                    const char* what);

// H = [H_1 ... H_P], [H_p]_{i,k} = exp(j omega_k dt_p(i)) for k = 1..K-1.
struct SrpMatrix {
  int pairs = 0;
  int bins = 0;
  Eigen::MatrixXcd H;

  Eigen::Index candidates() const { return H.rows(); }
};

SrpMatrix build_srp_matrix(const TdoaTable& tdoa, const FrameSpec& frame,
                           std::size_t memory_cap = kDefaultMemoryCap);

using SrpMap = Eigen::VectorXd;

// z = 2 Re[H psi].
SrpMap srp_map_exact(const SrpMatrix& srp, const FdGcc& gcc);

struct Location {
  Eigen::Index index = 0;  // 0-based
  Point3 point = Point3::Zero();
};

// argmax of z; ties resolve to the lowest index.
Eigen::Index argmax_lowest(const SrpMap& z);
Location locate(const SrpMap& z, const CandidateGrid& grid);

}  // namespace srp
