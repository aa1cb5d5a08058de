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

#include "srpmap/wav.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "srpmap/error.hpp"

namespace srp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }

float le_float(const unsigned char* p) { return std::bit_cast<float>(le32(p)); }

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

MultichannelAudio read_wav(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(path.string() + " is not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Tolerate a truncated trailing data chunk.
      if (std::memcmp(chunk, "data", 4) != 0) throw FormatError("truncated chunk in " + path.string());
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("short fmt chunk");
      format = le16(bytes.data() + body);
      channels = le16(bytes.data() + body + 2);
      rate = le32(bytes.data() + body + 4);
      bits = le16(bytes.data() + body + 14);
      if (format == kFormatExtensible && size >= 26) format = le16(bytes.data() + body + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min(size, bytes.size() - body);
    }
    pos = body + size + (size & 1U);
  }
  if (channels == 0 || rate == 0) throw FormatError("missing fmt chunk in " + path.string());
  if (data == nullptr) throw FormatError("missing data chunk in " + path.string());

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw FormatError("unsupported WAV encoding (format " + std::to_string(format) + ", " + std::to_string(bits) +
                      " bits); expected 16-bit PCM or 32-bit float");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  MultichannelAudio audio;
  audio.sample_rate = rate;
  audio.samples.resize(static_cast<Eigen::Index>(frames), channels);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = data + (n * channels + c) * width;
      audio.samples(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
          pcm16 ? static_cast<std::int16_t>(le16(s)) / 32768.0 : static_cast<double>(le_float(s));
    }
  }
  return audio;
}

void write_wav(const std::filesystem::path& path, const MultichannelAudio& audio, SampleFormat format) {
  const auto channels = static_cast<std::uint16_t>(audio.channels());
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const std::uint32_t block = channels * bits / 8U;
  const auto data_size = static_cast<std::uint32_t>(audio.length() * block);

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);
  for (Eigen::Index n = 0; n < audio.length(); ++n) {
    for (Eigen::Index c = 0; c < audio.channels(); ++c) {
      const double v = audio.samples(n, c);
      if (format == SampleFormat::Pcm16) {
        // same 1/32768 step the reader uses; +1.0 saturates at the top code
        const long code = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
      } else {
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

MultichannelAudio read_raw_f32(const std::filesystem::path& path, int channels, double sample_rate) {
  if (channels < 1) throw FormatError("raw audio needs a positive channel count");
  const auto bytes = slurp(path);
  const std::size_t frames = bytes.size() / (4U * static_cast<std::size_t>(channels));
  MultichannelAudio audio;
  audio.sample_rate = sample_rate;
  audio.samples.resize(static_cast<Eigen::Index>(frames), channels);
  for (std::size_t n = 0; n < frames; ++n) {
    for (int c = 0; c < channels; ++c) {
      audio.samples(static_cast<Eigen::Index>(n), c) =
          le_float(bytes.data() + 4 * (n * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)));
    }
  }
  return audio;
}

MultichannelAudio read_audio(const std::filesystem::path& path, int channels, double sample_rate) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".wav") return read_wav(path);
  return read_raw_f32(path, channels, sample_rate);
}

}  // namespace srp
