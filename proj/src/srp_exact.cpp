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

#include "srpmap/srp_exact.hpp"

#include <complex>
#include <string>

#include "srpmap/error.hpp"

namespace srp {

void check_capacity(Eigen::Index rows, Eigen::Index cols, std::size_t element_bytes, std::size_t cap,
                    const char* what) {
  const long double bytes = static_cast<long double>(rows) * static_cast<long double>(cols) * element_bytes;
  if (bytes > static_cast<long double>(cap)) {
    throw CapacityError(std::string(what) + " of " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds the memory cap of " + std::to_string(cap) + " bytes");
  }
}

SrpMatrix build_srp_matrix(const TdoaTable& tdoa, const FrameSpec& frame, std::size_t memory_cap) {
  frame.validate();
  const Eigen::Index J = tdoa.candidates();
  const int P = static_cast<int>(tdoa.pairs());
  const int bins = frame.bins();
  check_capacity(J, static_cast<Eigen::Index>(P) * bins, sizeof(std::complex<double>), memory_cap, "SRP matrix");

  SrpMatrix srp;
  srp.pairs = P;
  srp.bins = bins;
  srp.H.resize(J, static_cast<Eigen::Index>(P) * bins);
  for (int p = 0; p < P; ++p) {
    for (int k = 1; k <= bins; ++k) {
      const double w = frame.omega(k);
      auto col = srp.H.col(static_cast<Eigen::Index>(p) * bins + (k - 1));
      for (Eigen::Index i = 0; i < J; ++i) col(i) = std::polar(1.0, w * tdoa.delta(i, p));
    }
  }
  return srp;
}

SrpMap srp_map_exact(const SrpMatrix& srp, const FdGcc& gcc) {
  if (gcc.psi.size() != srp.H.cols()) {
    throw DimensionError("FD GCC length " + std::to_string(gcc.psi.size()) + " does not match SRP matrix width " +
                         std::to_string(srp.H.cols()));
  }
  return 2.0 * (srp.H * gcc.psi).real();
}

Eigen::Index argmax_lowest(const SrpMap& z) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < z.size(); ++i) {
    if (z(i) > z(best)) best = i;
  }
  return best;
}

Location locate(const SrpMap& z, const CandidateGrid& grid) {
  if (z.size() != static_cast<Eigen::Index>(grid.size()) || z.size() == 0) {
    throw DimensionError("map and candidate grid sizes differ");
  }
  const Eigen::Index i = argmax_lowest(z);
  return {i, grid.points[static_cast<std::size_t>(i)]};
}

}  // namespace srp
