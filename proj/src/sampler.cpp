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

#include "srpmap/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "srpmap/error.hpp"

namespace srp {

namespace {

int positive_mod(long long a, long long b) { return static_cast<int>(((a % b) + b) % b); }

}  // namespace

double SampleSpec::mean_samples() const {
  if (half_widths.empty()) return 0.0;
  long long sum = 0;
  for (int n : half_widths) sum += n;
  return 1.0 + 2.0 * static_cast<double>(sum) / static_cast<double>(half_widths.size());
}

int sample_slot(int n, int half_width) { return positive_mod(n, 2LL * half_width + 1); }

int ifft_slot(int n, int half) { return positive_mod(n, 2LL * half); }

const char* to_string(SamplingPath path) {
  switch (path) {
    case SamplingPath::Matrix:
      return "matrix";
    case SamplingPath::Ifft:
      return "ifft";
    case SamplingPath::Auto:
      return "auto";
  }
  return "?";
}

SampleSpec sample_spec_from_widths(std::vector<int> half_widths, int half, int aux) {
  if (half < 2) throw ConfigError("frame half-length K must be >= 2");
  SampleSpec spec;
  spec.half = half;
  spec.aux = aux;
  spec.half_widths = std::move(half_widths);
  spec.offsets.reserve(spec.half_widths.size() + 1);
  Eigen::Index acc = 0;
  for (std::size_t p = 0; p < spec.half_widths.size(); ++p) {
    const int np = spec.half_widths[p];
    if (np < 0) throw ConfigError("negative sample half-width");
    if (2 * np + 1 > 2 * half) {
      throw ConfigError("pair " + std::to_string(p) + " needs " + std::to_string(2 * np + 1) +
                        " TD GCC samples but the frame only has 2K = " + std::to_string(2 * half) +
                        "; the frame length must well exceed twice the largest TDOA");
    }
    spec.offsets.push_back(acc);
    acc += 2 * np + 1;
  }
  spec.offsets.push_back(acc);
  return spec;
}

SampleSpec sample_spec(const TdoaTable& tdoa, const FrameSpec& frame, int aux) {
  frame.validate();
  if (aux < 0) throw ConfigError("N_aux must be >= 0");
  std::vector<int> widths;
  widths.reserve(static_cast<std::size_t>(tdoa.pairs()));
  for (Eigen::Index p = 0; p < tdoa.pairs(); ++p) {
    // Slack keeps exact multiples of T from flooring one short.
    const double ratio = tdoa.limit(p) * frame.sample_rate;
    widths.push_back(static_cast<int>(std::floor(ratio + 1e-9)) + aux);
  }
  return sample_spec_from_widths(std::move(widths), frame.half(), aux);
}

TdGccSampler::TdGccSampler(SampleSpec spec)
    : spec_(std::move(spec)),
      fft_(2 * spec_.half),
      twiddle_(static_cast<std::size_t>(2 * spec_.half)),
      half_spectrum_(static_cast<std::size_t>(spec_.half + 1)),
      lags_(static_cast<std::size_t>(2 * spec_.half)) {
  const int K = spec_.half;
  for (int m = 0; m < 2 * K; ++m) twiddle_[static_cast<std::size_t>(m)] = std::polar(1.0, std::numbers::pi * m / K);
}

TdGccSamples TdGccSampler::sample(const FdGcc& gcc, SamplingPath path) {
  const int K = spec_.half;
  if (gcc.bins != K - 1 || gcc.pairs != spec_.pairs() ||
      gcc.psi.size() != static_cast<Eigen::Index>(gcc.pairs) * gcc.bins) {
    throw DimensionError("FD GCC of " + std::to_string(gcc.pairs) + " pairs x " + std::to_string(gcc.bins) +
                         " bins does not match the sample spec");
  }
  TdGccSamples out;
  out.xi.resize(spec_.total());
  for (int p = 0; p < spec_.pairs(); ++p) {
    const int np = spec_.half_widths[static_cast<std::size_t>(p)];
    auto block = out.xi.segment(spec_.offset(p), spec_.width(p));
    const auto psi = gcc.pair(p);
    if (path == SamplingPath::Matrix) {
      for (int n = -np; n <= np; ++n) {
        std::complex<double> acc(0.0, 0.0);
        for (int k = 1; k < K; ++k) {
          acc += psi(k - 1) * twiddle_[static_cast<std::size_t>(positive_mod(1LL * k * n, 2LL * K))];
        }
        block(sample_slot(n, np)) = 2.0 * acc.real();
      }
    } else if (path == SamplingPath::Ifft) {
      half_spectrum_.front() = 0.0;
      half_spectrum_.back() = 0.0;
      for (int k = 1; k < K; ++k) half_spectrum_[static_cast<std::size_t>(k)] = psi(k - 1);
      fft_.inverse(half_spectrum_, lags_);
      for (int n = -np; n <= np; ++n) {
        block(sample_slot(n, np)) = lags_[static_cast<std::size_t>(ifft_slot(n, K))];
      }
    } else {
      throw ConfigError("sampling path must be resolved to matrix or ifft");
    }
  }
  return out;
}

TdGccSamples td_gcc_samples(const FdGcc& gcc, const SampleSpec& spec, SamplingPath path) {
  TdGccSampler sampler(spec);
  return sampler.sample(gcc, path);
}

Eigen::MatrixXcd dense_sampling_matrix(const SampleSpec& spec) {
  const int K = spec.half;
  const int P = spec.pairs();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(spec.total(), static_cast<Eigen::Index>(P) * (K - 1));
  for (int p = 0; p < P; ++p) {
    const int np = spec.half_widths[static_cast<std::size_t>(p)];
    for (int n = -np; n <= np; ++n) {
      for (int k = 1; k < K; ++k) {
        S(spec.offset(p) + sample_slot(n, np), static_cast<Eigen::Index>(p) * (K - 1) + k - 1) =
            std::polar(1.0, std::numbers::pi * k * n / K);
      }
    }
  }
  return S;
}

Eigen::MatrixXcd two_sided_sampling_matrix(const SampleSpec& spec) {
  const int K = spec.half;
  const int P = spec.pairs();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(spec.total(), 2LL * P * K);
  for (int p = 0; p < P; ++p) {
    const int np = spec.half_widths[static_cast<std::size_t>(p)];
    for (int n = -np; n <= np; ++n) {
      for (int k = -K + 1; k <= K; ++k) {
        S(spec.offset(p) + sample_slot(n, np), 2LL * p * K + positive_mod(k, 2LL * K)) =
            std::polar(1.0, std::numbers::pi * k * n / K);
      }
    }
  }
  return S;
}

Eigen::MatrixXcd two_sided_srp_matrix(const TdoaTable& tdoa, const FrameSpec& frame) {
  const int K = frame.half();
  const Eigen::Index J = tdoa.candidates();
  const Eigen::Index P = tdoa.pairs();
  Eigen::MatrixXcd H(J, 2 * P * K);
  for (Eigen::Index p = 0; p < P; ++p) {
    for (int k = -K + 1; k <= K; ++k) {
      const double w = frame.omega(k);
      const Eigen::Index col = 2 * p * K + positive_mod(k, 2LL * K);
      for (Eigen::Index i = 0; i < J; ++i) H(i, col) = std::polar(1.0, w * tdoa.delta(i, p));
    }
  }
  return H;
}

Eigen::VectorXcd two_sided_psi(const FdGcc& gcc) {
  const int K = gcc.bins + 1;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2LL * gcc.pairs * K);
  for (int p = 0; p < gcc.pairs; ++p) {
    const auto psi = gcc.pair(p);
    auto block = out.segment(2LL * p * K, 2LL * K);
    for (int k = 1; k < K; ++k) {
      block(k) = psi(k - 1);
      block(2 * K - k) = std::conj(psi(k - 1));
    }
  }
  return out;
}

}  // namespace srp
