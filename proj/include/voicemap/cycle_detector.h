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

#ifndef VOICEMAP_CYCLE_DETECTOR_H_
#define VOICEMAP_CYCLE_DETECTOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "voicemap/audio_buffer.h"

namespace voicemap {

inline constexpr double kDefaultSplOffsetDb = 100.0;
inline constexpr double kIntegratorAlpha = 0.999;
inline constexpr double kDriftHighpassHz = 50.0;

struct VoicingConfig {
  double f0_min_hz = 55.0;
  double f0_max_hz = 880.0;
  // Adjacent periods must satisfy 1/(1+max_jump) <= ratio <= 1+max_jump.
  double max_jump = 0.25;
  // Minimum number of consecutive consistent candidates.
  int min_run = 3;
  double spl_offset_db = kDefaultSplOffsetDb;
  double integrator_alpha = kIntegratorAlpha;
  // Centered sliding-mean window removed from the integrator output.
  double mean_window_s = 0.046;

  void Validate() const;
};

// One detected phonatory cycle on the 44.1 kHz analysis timeline.
struct CycleRecord {
  std::int64_t start_sample = 0;
  std::int64_t length_samples = 0;
  double f0_hz = 0.0;
  double spl_db = 0.0;
  double crest = 0.0;
  std::optional<double> cpps_db;
  std::optional<double> sb_db;

  double midpoint_seconds(int sample_rate) const {
    return (static_cast<double>(start_sample) +
            static_cast<double>(length_samples) / 2.0) /
           sample_rate;
  }
};

struct CycleMetrics {
  double spl_db = 0.0;
  double crest = 0.0;
};

class SilentCycleError : public std::domain_error {
 public:
  SilentCycleError() : std::domain_error("silent cycle") {}
};

// Second-order Butterworth high-pass at 50 Hz, one causal forward pass.
AudioBuffer Highpass50Hz(const AudioBuffer& buf);

// x[n] = y[n] + alpha * x[n-1], x[-1] = 0.
AudioBuffer LeakyIntegrate(const AudioBuffer& buf,
                           double alpha = kIntegratorAlpha);

// rms = sqrt(mean(x^2)); crest = max|x| / rms;
// spl_db = 20 log10(rms) + spl_offset_db.
// Throws std::invalid_argument for fewer than 2 samples and
// SilentCycleError when every sample is zero.
CycleMetrics ComputeCycleMetrics(std::span<const double> samples,
                                 double spl_offset_db = kDefaultSplOffsetDb);

// Integrator-based cycle detection on the acoustic signal:
//   high-pass 50 Hz -> leaky integrator -> centered sliding-mean removal ->
//   positive-going zero crossings -> f0 band check -> voicing gate.
// Cycle metrics are measured on the unfiltered samples. `buf` must be at
// 44.1 kHz (std::invalid_argument otherwise).
std::vector<CycleRecord> DetectCycles(const AudioBuffer& buf,
                                      const VoicingConfig& cfg = {});

}  // namespace voicemap

#endif  // VOICEMAP_CYCLE_DETECTOR_H_
