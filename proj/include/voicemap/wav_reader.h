// Copyright 2026 The Voicemap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOICEMAP_WAV_READER_H_
#define VOICEMAP_WAV_READER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "voicemap/audio_buffer.h"

namespace voicemap {

enum class WavErrorKind {
  kUnreadable,           // file missing or I/O failure
  kMalformed,            // not RIFF/WAVE, or required chunks missing
  kNonPcm,               // encoding other than integer PCM
  kUnsupportedBitDepth,  // PCM but not 16-bit
  kMultichannel,         // more than one channel
  kEmpty,                // zero audio frames
};

const char* WavErrorLabel(WavErrorKind kind);

class WavError : public std::runtime_error {
 public:
  WavError(WavErrorKind kind, const std::string& path,
           const std::string& detail);

  WavErrorKind kind() const { return kind_; }

 private:
  WavErrorKind kind_;
};

// Decodes a 16-bit PCM mono RIFF/WAVE file. Samples are scaled by 1/32768;
// no normalization or DC removal. source_id is the file stem.
AudioBuffer LoadWav(const std::filesystem::path& path);

// Same as LoadWav but from an in-memory image of the file.
AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes,
                      const std::string& source_id);

}  // namespace voicemap

#endif  // VOICEMAP_WAV_READER_H_
