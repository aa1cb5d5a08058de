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

#include "srpmap/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "srpmap/error.hpp"

namespace srp {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  int n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Impl(int size) : n(size) {
    real = fftw_alloc_real(static_cast<std::size_t>(n));
    spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    std::lock_guard lock(planner_mutex());
    r2c = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    {
      std::lock_guard lock(planner_mutex());
      if (r2c) fftw_destroy_plan(r2c);
      if (c2r) fftw_destroy_plan(c2r);
    }
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(int n) {
  if (n < 2 || n % 2 != 0) throw DimensionError("FFT length must be even and >= 2");
  impl_ = std::make_unique<Impl>(n);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

int RealFft::size() const { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const auto n = static_cast<std::size_t>(impl_->n);
  if (in.size() != n || out.size() != n / 2 + 1) throw DimensionError("RealFft::forward size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->r2c);
  for (std::size_t k = 0; k <= n / 2; ++k) out[k] = {impl_->spec[k][0], impl_->spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const auto n = static_cast<std::size_t>(impl_->n);
  if (in.size() != n / 2 + 1 || out.size() != n) throw DimensionError("RealFft::inverse size mismatch");
  for (std::size_t k = 0; k <= n / 2; ++k) {
    impl_->spec[k][0] = in[k].real();
    impl_->spec[k][1] = in[k].imag();
  }
  // c2r ignores the imaginary parts of the DC and Nyquist bins.
  fftw_execute(impl_->c2r);
  std::copy(impl_->real, impl_->real + n, out.begin());
}

}  // namespace srp
