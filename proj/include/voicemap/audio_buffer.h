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

#ifndef VOICEMAP_AUDIO_BUFFER_H_
#define VOICEMAP_AUDIO_BUFFER_H_

#include <string>
#include <vector>

namespace voicemap {

// All cycle and frame analysis runs at this rate.
inline constexpr int kAnalysisSampleRate = 44100;

// Mono audio, full scale = 1.0. Amplitudes are never normalized; the
// level structure of the source file is carried through verbatim.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;
  std::string source_id;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

}  // namespace voicemap

#endif  // VOICEMAP_AUDIO_BUFFER_H_
