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
#include <complex>
#include <vector>

#include "srpmap/fft.hpp"
#include "srpmap/frontend.hpp"
#include "srpmap/scene.hpp"
#include "srpmap/srp_exact.hpp"

namespace srp {

inline constexpr int kDefaultAuxSamples = 2;

// Per-pair half-widths N_p = floor(dt_p0 / T) + N_aux. Pair p owns the
// 2 N_p + 1 lags n = -N_p..N_p, stored at slot mod(n, 2 N_p + 1) of its block.
struct SampleSpec {
  int half = 0;  // K
  int aux = 0;
  std::vector<int> half_widths;
  std::vector<Eigen::Index> offsets;  // block start per pair, plus total at the end

  int pairs() const { return static_cast<int>(half_widths.size()); }
  int width(int p) const { return 2 * half_widths[static_cast<std::size_t>(p)] + 1; }
  Eigen::Index offset(int p) const { return offsets[static_cast<std::size_t>(p)]; }
  Eigen::Index total() const { return offsets.back(); }  // P N
  // N = 1 + (2 / P) sum_p N_p.
  double mean_samples() const;
};

// Slot of lag n within a block of 2 N_p + 1 samples.
int sample_slot(int n, int half_width);
// Index of lag n within a length-2K inverse FFT output.
int ifft_slot(int n, int half);

// Throws ConfigError when 2 N_p + 1 > 2K for any pair.
SampleSpec sample_spec(const TdoaTable& tdoa, const FrameSpec& frame, int aux = kDefaultAuxSamples);
SampleSpec sample_spec_from_widths(std::vector<int> half_widths, int half, int aux = 0);

enum class SamplingPath { Matrix, Ifft, Auto };

const char* to_string(SamplingPath path);

// Stacked TD GCC samples, real, laid out per SampleSpec.
struct TdGccSamples {
  Eigen::VectorXd xi;
};

// Computes xi = 2 Re[S psi] either by direct evaluation of the sampling
// matrix rows or through one unnormalized length-2K inverse FFT per pair
// followed by lag selection. Owns FFT buffers; use one instance per thread.
class TdGccSampler {
 public:
  explicit TdGccSampler(SampleSpec spec);

  const SampleSpec& spec() const { return spec_; }
  // `path` must be Matrix or Ifft.
  TdGccSamples sample(const FdGcc& gcc, SamplingPath path);

 private:
  SampleSpec spec_;
  RealFft fft_;
  std::vector<std::complex<double>> twiddle_;  // exp(j pi m / K), m = 0..2K-1
  std::vector<std::complex<double>> half_spectrum_;
  std::vector<double> lags_;
};

TdGccSamples td_gcc_samples(const FdGcc& gcc, const SampleSpec& spec, SamplingPath path);

// Dense operators for verification; the runtime paths never build them.
//   S     : PN x P(K-1),  [S_p]_{slot(n),k} = exp(j pi k n / K), k = 1..K-1
//   S-bar : PN x 2PK,     two-sided rows, column mod(k, 2K) for k = -K+1..K
//   H-bar : J x 2PK
//   psi-bar: 2PK, conjugate-symmetric, zero at bins 0 and K
Eigen::MatrixXcd dense_sampling_matrix(const SampleSpec& spec);
Eigen::MatrixXcd two_sided_sampling_matrix(const SampleSpec& spec);
Eigen::MatrixXcd two_sided_srp_matrix(const TdoaTable& tdoa, const FrameSpec& frame);
Eigen::VectorXcd two_sided_psi(const FdGcc& gcc);

}  // namespace srp
