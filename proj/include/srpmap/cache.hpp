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
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "srpmap/evaluator.hpp"
#include "srpmap/interpolator.hpp"
#include "srpmap/lr_baseline.hpp"
#include "srpmap/sampler.hpp"

namespace srp {

// Versioned little-endian container for precomputed operators.
//
//   "SRPM" | u32 version | u64 geometry hash | u32 method | u32 path
//   | u64 J | u64 P | u64 K | u32 record count | records...
//
// Each record is u32 name length, name bytes, u8 type tag, payload. Doubles
// are IEEE-754 binary64; complex values are interleaved (re, im). Records
// are written in name order so equal caches encode to equal bytes.
inline constexpr std::uint32_t kCacheVersion = 1;

using CacheRecord = std::variant<Eigen::MatrixXd, Eigen::MatrixXcd, std::vector<std::int64_t>, CsrMatrix>;

struct OperatorCache {
  std::uint64_t geometry_hash = 0;
  Method method = Method::Conventional;
  SamplingPath path = SamplingPath::Matrix;
  std::int64_t candidates = 0;
  std::int64_t pairs = 0;
  std::int64_t half = 0;
  std::map<std::string, CacheRecord> records;

  bool has(const std::string& name) const { return records.count(name) != 0; }
  // Throw FormatError when the record is missing or of another type.
  const Eigen::MatrixXd& real(const std::string& name) const;
  const Eigen::MatrixXcd& complex(const std::string& name) const;
  const std::vector<std::int64_t>& integers(const std::string& name) const;
  const CsrMatrix& sparse(const std::string& name) const;
};

std::vector<std::uint8_t> encode_cache(const OperatorCache& cache);
// Throws FormatError on bad magic, unknown version or truncated input.
OperatorCache decode_cache(const std::vector<std::uint8_t>& bytes);
void save_cache(const std::filesystem::path& path, const OperatorCache& cache);
OperatorCache load_cache(const std::filesystem::path& path);

// Record helpers for the operator types.
void put_spec(OperatorCache& cache, const SampleSpec& spec);
SampleSpec get_spec(const OperatorCache& cache);

}  // namespace srp
