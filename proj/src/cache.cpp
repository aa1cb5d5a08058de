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

#include "srpmap/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "srpmap/error.hpp"

namespace srp {

namespace {

enum : std::uint8_t { kTagReal = 1, kTagComplex = 2, kTagIntegers = 3, kTagSparse = 4 };

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { word(v); }
  void u64(std::uint64_t v) { word(v); }
  void i64(std::int64_t v) { word(static_cast<std::uint64_t>(v)); }
  void f64(double v) { word(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  template <class T>
  void word(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() { return word<std::uint32_t>(); }
  std::uint64_t u64() { return word<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(word<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(word<std::uint64_t>()); }
  std::string bytes() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  // Guards allocations against corrupted counts.
  std::uint64_t count(std::uint64_t element_bytes) {
    const std::uint64_t n = u64();
    if (element_bytes > 0 && n > (in_.size() - pos_) / element_bytes) throw FormatError("cache: truncated payload");
    return n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("cache: unexpected end of data");
  }
  template <class T>
  T word() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

struct Encode {
  Writer& w;
  void operator()(const Eigen::MatrixXd& m) const {
    w.u8(kTagReal);
    w.u64(static_cast<std::uint64_t>(m.rows()));
    w.u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) w.f64(m.data()[i]);
  }
  void operator()(const Eigen::MatrixXcd& m) const {
    w.u8(kTagComplex);
    w.u64(static_cast<std::uint64_t>(m.rows()));
    w.u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      w.f64(m.data()[i].real());
      w.f64(m.data()[i].imag());
    }
  }
  void operator()(const std::vector<std::int64_t>& v) const {
    w.u8(kTagIntegers);
    w.u64(v.size());
    for (auto x : v) w.i64(x);
  }
  void operator()(const CsrMatrix& a) const {
    w.u8(kTagSparse);
    w.u64(static_cast<std::uint64_t>(a.rows));
    w.u64(static_cast<std::uint64_t>(a.cols));
    w.u64(a.row_ptr.size());
    for (auto x : a.row_ptr) w.i64(x);
    w.u64(a.col_idx.size());
    for (auto x : a.col_idx) w.i64(x);
    w.u64(a.values.size());
    for (auto x : a.values) w.f64(x);
  }
};

CacheRecord decode_record(Reader& r) {
  const std::uint8_t tag = r.u8();
  switch (tag) {
    case kTagReal:
    case kTagComplex: {
      const std::uint64_t rows = r.u64();
      const std::uint64_t cols = r.u64();
      if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) throw FormatError("cache: implausible matrix size");
      if (tag == kTagReal) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.f64();
        return m;
      }
      Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double re = r.f64();
        const double im = r.f64();
        m.data()[i] = {re, im};
      }
      return m;
    }
    case kTagIntegers: {
      std::vector<std::int64_t> v(r.count(8));
      for (auto& x : v) x = r.i64();
      return v;
    }
    case kTagSparse: {
      CsrMatrix a;
      a.rows = static_cast<Eigen::Index>(r.u64());
      a.cols = static_cast<Eigen::Index>(r.u64());
      a.row_ptr.resize(r.count(8));
      for (auto& x : a.row_ptr) x = r.i64();
      a.col_idx.resize(r.count(8));
      for (auto& x : a.col_idx) x = r.i64();
      a.values.resize(r.count(8));
      for (auto& x : a.values) x = r.f64();
      if (a.row_ptr.size() != static_cast<std::size_t>(a.rows) + 1 || a.col_idx.size() != a.values.size() ||
          a.row_ptr.back() != static_cast<std::int64_t>(a.values.size())) {
        throw FormatError("cache: inconsistent sparse record");
      }
      return a;
    }
    default:
      throw FormatError("cache: unknown record type " + std::to_string(tag));
  }
}

template <class T>
const T& record(const OperatorCache& cache, const std::string& name) {
  auto it = cache.records.find(name);
  if (it == cache.records.end()) throw FormatError("cache: missing record '" + name + "'");
  const T* v = std::get_if<T>(&it->second);
  if (v == nullptr) throw FormatError("cache: record '" + name + "' has an unexpected type");
  return *v;
}

}  // namespace

const Eigen::MatrixXd& OperatorCache::real(const std::string& name) const { return record<Eigen::MatrixXd>(*this, name); }
const Eigen::MatrixXcd& OperatorCache::complex(const std::string& name) const {
  return record<Eigen::MatrixXcd>(*this, name);
}
const std::vector<std::int64_t>& OperatorCache::integers(const std::string& name) const {
  return record<std::vector<std::int64_t>>(*this, name);
}
const CsrMatrix& OperatorCache::sparse(const std::string& name) const { return record<CsrMatrix>(*this, name); }

std::vector<std::uint8_t> encode_cache(const OperatorCache& cache) {
  Writer w;
  for (char ch : std::string("SRPM")) w.u8(static_cast<std::uint8_t>(ch));
  w.u32(kCacheVersion);
  w.u64(cache.geometry_hash);
  w.u32(static_cast<std::uint32_t>(cache.method));
  w.u32(static_cast<std::uint32_t>(cache.path));
  w.i64(cache.candidates);
  w.i64(cache.pairs);
  w.i64(cache.half);
  w.u32(static_cast<std::uint32_t>(cache.records.size()));
  for (const auto& [name, rec] : cache.records) {
    w.bytes(name);
    std::visit(Encode{w}, rec);
  }
  return w.take();
}

OperatorCache decode_cache(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), "SRPM", 4) != 0) {
    throw FormatError("cache: bad magic bytes (not an operator cache)");
  }
  Reader r(bytes);
  for (int i = 0; i < 4; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version != kCacheVersion) throw FormatError("cache: unsupported format version " + std::to_string(version));
  OperatorCache cache;
  cache.geometry_hash = r.u64();
  const std::uint32_t method = r.u32();
  const std::uint32_t path = r.u32();
  if (method > static_cast<std::uint32_t>(Method::SamplingSparseInterp)) throw FormatError("cache: unknown method");
  if (path > static_cast<std::uint32_t>(SamplingPath::Auto)) throw FormatError("cache: unknown sampling path");
  cache.method = static_cast<Method>(method);
  cache.path = static_cast<SamplingPath>(path);
  cache.candidates = r.i64();
  cache.pairs = r.i64();
  cache.half = r.i64();
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.bytes();
    cache.records.emplace(std::move(name), decode_record(r));
  }
  if (!r.done()) throw FormatError("cache: trailing bytes");
  return cache;
}

void save_cache(const std::filesystem::path& path, const OperatorCache& cache) {
  const auto bytes = encode_cache(cache);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write cache " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing cache " + path.string());
}

OperatorCache load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open cache " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_cache(bytes);
}

void put_spec(OperatorCache& cache, const SampleSpec& spec) {
  std::vector<std::int64_t> v{spec.half, spec.aux};
  for (int n : spec.half_widths) v.push_back(n);
  cache.records["spec"] = std::move(v);
}

SampleSpec get_spec(const OperatorCache& cache) {
  const auto& v = cache.integers("spec");
  if (v.size() < 2) throw FormatError("cache: malformed sample spec");
  std::vector<int> widths(v.begin() + 2, v.end());
  return sample_spec_from_widths(std::move(widths), static_cast<int>(v[0]), static_cast<int>(v[1]));
}

}  // namespace srp
