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

#include <filesystem>

#include "srpmap/frontend.hpp"

namespace srp {

enum class SampleFormat { Pcm16, Float32 };

// Reads 16-bit PCM or 32-bit IEEE float RIFF/WAVE files (plain or
// WAVE_FORMAT_EXTENSIBLE). PCM is scaled to [-1, 1). Throws FormatError.
MultichannelAudio read_wav(const std::filesystem::path& path);

// PCM16 output is clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const MultichannelAudio& audio,
               SampleFormat format = SampleFormat::Float32);

// Headerless interleaved little-endian float32.
MultichannelAudio read_raw_f32(const std::filesystem::path& path, int channels, double sample_rate);

// Dispatches on the extension: .wav is parsed, anything else is raw float32.
MultichannelAudio read_audio(const std::filesystem::path& path, int channels, double sample_rate);

}  // namespace srp
