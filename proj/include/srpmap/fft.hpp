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

#include <complex>
#include <memory>
#include <span>

namespace srp {

// Real-input FFT of fixed even length n backed by FFTW plans.
//
// forward:  X[k] = sum_n x[n] e^{-j 2 pi k n / n_fft},    k = 0..n/2
// inverse:  x[n] = sum_{k=-n/2+1}^{n/2} X[k] e^{+j 2 pi k n / n_fft}
//
// The inverse is unnormalized (no 1/n factor) and reads only the n/2+1
// non-negative bins, treating the spectrum as conjugate-symmetric.
// An instance owns its work buffers and is not safe to share across threads;
// distinct instances may be used concurrently.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const;
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace srp
