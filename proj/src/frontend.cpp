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

#include "srpmap/frontend.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "srpmap/error.hpp"
#include "srpmap/fft.hpp"

namespace srp {

double FrameSpec::bandlimit() const { return std::numbers::pi * sample_rate; }

double FrameSpec::omega(int k) const { return k * bandlimit() / half(); }

void FrameSpec::validate() const {
  if (frame_length < 4 || frame_length % 2 != 0) {
    throw ConfigError("frame length must be even and >= 4, got " + std::to_string(frame_length));
  }
  if (hop < 0) throw ConfigError("hop must be >= 1 (or 0 for the default of K)");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw ConfigError("sample rate must be positive");
}

Eigen::VectorXd sqrt_hann(int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = std::sqrt(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n));
  return w;
}

Eigen::Index frame_count(const MultichannelAudio& audio, const FrameSpec& spec) {
  if (audio.length() < spec.frame_length) return 0;
  return (audio.length() - spec.frame_length) / spec.effective_hop() + 1;
}

Eigen::MatrixXcd stft_frame(const MultichannelAudio& audio, const FrameSpec& spec, Eigen::Index frame,
                            Window window) {
  spec.validate();
  const int n = spec.frame_length;
  const Eigen::Index start = frame * spec.effective_hop();
  if (frame < 0 || start + n > audio.length()) {
    throw BoundsError("frame " + std::to_string(frame) + " exceeds the signal of " +
                      std::to_string(audio.length()) + " samples");
  }
  const Eigen::VectorXd w = window == Window::SqrtHann ? sqrt_hann(n) : Eigen::VectorXd::Ones(n);
  RealFft fft(n);
  Eigen::MatrixXcd spectra(spec.half() + 1, audio.channels());
  Eigen::VectorXd buffer(n);
  for (Eigen::Index m = 0; m < audio.channels(); ++m) {
    buffer = audio.samples.col(m).segment(start, n).cwiseProduct(w);
    fft.forward({buffer.data(), static_cast<std::size_t>(n)},
                {spectra.col(m).data(), static_cast<std::size_t>(spec.half() + 1)});
  }
  return spectra;
}

Eigen::VectorXcd apply_phat(const Eigen::VectorXcd& cross, double floor) {
  Eigen::VectorXcd out(cross.size());
  for (Eigen::Index i = 0; i < cross.size(); ++i) {
    const double mag = std::abs(cross(i));
    out(i) = mag > floor && mag > 0.0 ? cross(i) / mag : std::complex<double>(0.0, 0.0);
  }
  return out;
}

double default_phat_floor(const Eigen::MatrixXcd& spectra) {
  if (spectra.cols() == 0) return 0.0;
  return 1e-12 * spectra.cwiseAbs2().sum() / static_cast<double>(spectra.cols());
}

FdGcc fd_gcc(const Eigen::MatrixXcd& spectra, const PairTable& pairs, Weighting weighting,
             std::optional<double> floor) {
  if (spectra.rows() < 3) throw DimensionError("spectra need at least bins 0..2");
  for (const auto& pair : pairs.pairs) {
    if (std::max(pair.mic, pair.ref) >= spectra.cols()) {
      throw DimensionError("spectra have " + std::to_string(spectra.cols()) +
                           " channels, pair table needs more");
    }
  }
  const int K = static_cast<int>(spectra.rows()) - 1;
  FdGcc gcc;
  gcc.bins = K - 1;
  gcc.pairs = static_cast<int>(pairs.size());
  gcc.weighting = weighting;
  gcc.psi.resize(static_cast<Eigen::Index>(gcc.pairs) * gcc.bins);
  const double eps = floor && *floor >= 0.0 ? *floor : default_phat_floor(spectra);
  for (int p = 0; p < gcc.pairs; ++p) {
    const auto& pair = pairs[static_cast<std::size_t>(p)];
    Eigen::VectorXcd cross = spectra.col(pair.mic).segment(1, gcc.bins).cwiseProduct(
        spectra.col(pair.ref).segment(1, gcc.bins).conjugate());
    gcc.pair(p) = weighting == Weighting::Phat ? apply_phat(cross, eps) : cross;
  }
  return gcc;
}

}  // namespace srp
