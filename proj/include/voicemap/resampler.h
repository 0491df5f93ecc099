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

#ifndef VOICEMAP_RESAMPLER_H_
#define VOICEMAP_RESAMPLER_H_

#include "voicemap/audio_buffer.h"

namespace voicemap {

// Kaiser-windowed sinc interpolation. The kernel spans kSincHalfWidth
// zero crossings of the narrower of the two Nyquist bands on each side, so
// at least 2 * kSincHalfWidth taps contribute to every output sample.
inline constexpr int kSincHalfWidth = 32;

// Converts `buf` to `target_rate` with band-limited interpolation. Output
// length is round(n * target_rate / input_rate). A buffer already at the
// target rate is returned unchanged, sample for sample.
AudioBuffer Resample(const AudioBuffer& buf, int target_rate);

inline AudioBuffer ResampleTo44100(const AudioBuffer& buf) {
  return Resample(buf, kAnalysisSampleRate);
}

}  // namespace voicemap

#endif  // VOICEMAP_RESAMPLER_H_
