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

#include "voicemap/wav_reader.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace voicemap {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

const char* WavErrorLabel(WavErrorKind kind) {
  switch (kind) {
    case WavErrorKind::kUnreadable:
      return "unreadable file";
    case WavErrorKind::kMalformed:
      return "malformed RIFF/WAVE";
    case WavErrorKind::kNonPcm:
      return "non-PCM encoding";
    case WavErrorKind::kUnsupportedBitDepth:
      return "unsupported bit depth";
    case WavErrorKind::kMultichannel:
      return "multichannel input";
    case WavErrorKind::kEmpty:
      return "zero-length audio";
  }
  return "unknown";
}

WavError::WavError(WavErrorKind kind, const std::string& path,
                   const std::string& detail)
    : std::runtime_error(path + ": " + WavErrorLabel(kind) +
                         (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind) {}

namespace {

// `label` names the input in error messages.
AudioBuffer Decode(std::span<const std::uint8_t> bytes,
                   const std::string& source_id, const std::string& label) {
  const std::uint8_t* data = bytes.data();
  const std::size_t size = bytes.size();
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw WavError(WavErrorKind::kMalformed, label, "missing RIFF/WAVE");
  }

  FormatChunk fmt;
  bool have_fmt = false;
  const std::uint8_t* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint8_t* chunk = data + pos;
    std::size_t chunk_size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t available = size - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || available < 16) {
        throw WavError(WavErrorKind::kMalformed, label, "short fmt chunk");
      }
      fmt.format = ReadU16(data + body);
      fmt.channels = ReadU16(data + body + 2);
      fmt.sample_rate = ReadU32(data + body + 4);
      fmt.bits_per_sample = ReadU16(data + body + 14);
      if (fmt.format == kFormatExtensible && chunk_size >= 40 &&
          available >= 40) {
        // First two bytes of the SubFormat GUID carry the format code.
        fmt.format = ReadU16(data + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Streaming writers leave the size field at its maximum; clamp to
      // what is actually present.
      pcm = data + body;
      pcm_bytes = std::min(chunk_size, available);
      if (have_fmt) break;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) {
    throw WavError(WavErrorKind::kMalformed, label, "no fmt chunk");
  }
  if (fmt.format != kFormatPcm) {
    throw WavError(WavErrorKind::kNonPcm, label,
                   "format tag " + std::to_string(fmt.format));
  }
  if (fmt.bits_per_sample != 16) {
    throw WavError(WavErrorKind::kUnsupportedBitDepth, label,
                   std::to_string(fmt.bits_per_sample) + " bits");
  }
  if (fmt.channels != 1) {
    throw WavError(WavErrorKind::kMultichannel, label,
                   std::to_string(fmt.channels) + " channels");
  }
  if (fmt.sample_rate == 0) {
    throw WavError(WavErrorKind::kMalformed, label, "zero sample rate");
  }
  if (pcm == nullptr) {
    throw WavError(WavErrorKind::kMalformed, label, "no data chunk");
  }
  const std::size_t frames = pcm_bytes / 2;
  if (frames == 0) {
    throw WavError(WavErrorKind::kEmpty, label, "");
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(fmt.sample_rate);
  buf.source_id = source_id;
  buf.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    auto raw = static_cast<std::int16_t>(ReadU16(pcm + 2 * i));
    buf.samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return buf;
}

}  // namespace

AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes,
                      const std::string& source_id) {
  return Decode(bytes, source_id, source_id);
}

AudioBuffer LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw WavError(WavErrorKind::kUnreadable, path.string(), "cannot open");
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw WavError(WavErrorKind::kUnreadable, path.string(), "read failed");
  }
  return Decode(bytes, path.stem().string(), path.string());
}

}  // namespace voicemap
