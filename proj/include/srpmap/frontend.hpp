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
#include <optional>

#include "srpmap/scene.hpp"

namespace srp {

// Frame of 2K samples at sample rate 1/T; usable single-sided bins are
// k = 1..K-1 at omega_k = k * pi / (K T).
struct FrameSpec {
  int frame_length = 512;  // 2K
  double sample_rate = 4000.0;
  int hop = 0;             // 0 selects K (50% overlap)

  int half() const { return frame_length / 2; }
  int bins() const { return half() - 1; }
  int effective_hop() const { return hop > 0 ? hop : half(); }
  double sample_period() const { return 1.0 / sample_rate; }
  double bandlimit() const;  // omega_b = pi / T
  double omega(int k) const;
  // Throws ConfigError unless 2K is even and >= 4, hop >= 0 and fs > 0.
  void validate() const;
};

// Samples stored as (num_samples x channels); each channel is contiguous.
struct MultichannelAudio {
  double sample_rate = 0.0;
  Eigen::MatrixXd samples;

  Eigen::Index channels() const { return samples.cols(); }
  Eigen::Index length() const { return samples.rows(); }
};

enum class Window { SqrtHann, Rectangular };

// Periodic square-root Hann window of length n.
Eigen::VectorXd sqrt_hann(int n);

Eigen::Index frame_count(const MultichannelAudio& audio, const FrameSpec& spec);

// Spectra at bins 0..K, one column per channel. Throws BoundsError when the
// frame does not fit into the signal.
Eigen::MatrixXcd stft_frame(const MultichannelAudio& audio, const FrameSpec& spec, Eigen::Index frame,
                            Window window = Window::SqrtHann);

enum class Weighting { Phat, Unweighted };

// Stacked single-sided FD GCC: pair-major, then bin k = 1..K-1.
struct FdGcc {
  int bins = 0;  // K-1
  int pairs = 0;
  Weighting weighting = Weighting::Phat;
  Eigen::VectorXcd psi;

  auto pair(int p) const { return psi.segment(static_cast<Eigen::Index>(p) * bins, bins); }
  auto pair(int p) { return psi.segment(static_cast<Eigen::Index>(p) * bins, bins); }
};

// Normalizes each entry to unit magnitude; entries with magnitude not above
// `floor` become zero.
Eigen::VectorXcd apply_phat(const Eigen::VectorXcd& cross, double floor);

// 1e-12 times the mean per-channel energy of the spectra.
double default_phat_floor(const Eigen::MatrixXcd& spectra);

// psi_p(k) = gamma * y_m(k) conj(y_m'(k)) for k = 1..K-1. With
// Weighting::Phat a negative or absent floor selects default_phat_floor.
FdGcc fd_gcc(const Eigen::MatrixXcd& spectra, const PairTable& pairs, Weighting weighting = Weighting::Phat,
             std::optional<double> floor = std::nullopt);

}  // namespace srp
