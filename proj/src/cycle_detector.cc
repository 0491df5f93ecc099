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

#include "voicemap/cycle_detector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "voicemap/filters.h"

namespace voicemap {
namespace {

struct Candidate {
  std::int64_t start;
  std::int64_t length;
};

// Removes a centered moving average of `window` samples (odd); near the
// edges the average covers only the samples that exist.
std::vector<double> RemoveSlidingMean(std::span<const double> x,
                                      std::int64_t window) {
  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t half = window / 2;
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::int64_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t lo = std::max<std::int64_t>(0, i - half);
    const std::int64_t hi = std::min<std::int64_t>(n, i + half + 1);
    const long double mean = (prefix[hi] - prefix[lo]) / (hi - lo);
    out[i] = static_cast<double>(x[i] - mean);
  }
  return out;
}

}  // namespace

void VoicingConfig::Validate() const {
  if (!(f0_min_hz > 0.0) || !(f0_max_hz > f0_min_hz)) {
    throw std::invalid_argument("voicing: f0 band must satisfy 0 < min < max");
  }
  if (!(max_jump > 0.0)) {
    throw std::invalid_argument("voicing: max_jump must be positive");
  }
  if (min_run < 1) {
    throw std::invalid_argument("voicing: min_run must be at least 1");
  }
  if (!(integrator_alpha > 0.0 && integrator_alpha < 1.0)) {
    throw std::invalid_argument("voicing: integrator alpha must be in (0, 1)");
  }
  if (!(mean_window_s > 0.0)) {
    throw std::invalid_argument("voicing: mean window must be positive");
  }
}

AudioBuffer Highpass50Hz(const AudioBuffer& buf) {
  IirFilter hp(FilterSpec{FilterKind::kHighpassButterworth2, kDriftHighpassHz,
                          static_cast<double>(buf.sample_rate)});
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.source_id = buf.source_id;
  out.samples = hp.Process(buf.samples);
  return out;
}

AudioBuffer LeakyIntegrate(const AudioBuffer& buf, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("LeakyIntegrate: alpha must be in (0, 1)");
  }
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.source_id = buf.source_id;
  out.samples.resize(buf.samples.size());
  double state = 0.0;
  for (std::size_t n = 0; n < buf.samples.size(); ++n) {
    state = buf.samples[n] + alpha * state;
    out.samples[n] = state;
  }
  return out;
}

CycleMetrics ComputeCycleMetrics(std::span<const double> samples,
                                 double spl_offset_db) {
  if (samples.size() < 2) {
    throw std::invalid_argument("cycle needs at least 2 samples");
  }
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) throw SilentCycleError();
  // Accumulate in peak-normalized units so a constant-|x| cycle gives an
  // RMS of exactly 1.
  double energy = 0.0;
  for (double s : samples) {
    const double u = s / peak;
    energy += u * u;
  }
  const double rms_rel =
      std::sqrt(energy / static_cast<double>(samples.size()));
  CycleMetrics m;
  m.crest = std::max(1.0, 1.0 / rms_rel);
  m.spl_db = 20.0 * std::log10(peak * rms_rel) + spl_offset_db;
  return m;
}

std::vector<CycleRecord> DetectCycles(const AudioBuffer& buf,
                                      const VoicingConfig& cfg) {
  cfg.Validate();
  if (buf.sample_rate != kAnalysisSampleRate) {
    throw std::invalid_argument("DetectCycles expects 44100 Hz input, got " +
                                std::to_string(buf.sample_rate));
  }
  const double fs = buf.sample_rate;
  const AudioBuffer integrated =
      LeakyIntegrate(Highpass50Hz(buf), cfg.integrator_alpha);
  const std::int64_t window =
      std::llround(cfg.mean_window_s * fs) | std::int64_t{1};
  const std::vector<double> centered =
      RemoveSlidingMean(integrated.samples, window);

  std::vector<std::int64_t> crossings;
  for (std::size_t i = 1; i < centered.size(); ++i) {
    if (centered[i - 1] < 0.0 && centered[i] >= 0.0) {
      crossings.push_back(static_cast<std::int64_t>(i));
    }
  }

  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k + 1 < crossings.size(); ++k) {
    const std::int64_t length = crossings[k + 1] - crossings[k];
    const double f0 = fs / static_cast<double>(length);
    if (f0 >= cfg.f0_min_hz && f0 <= cfg.f0_max_hz) {
      candidates.push_back({crossings[k], length});
    }
  }

  const double ratio_hi = 1.0 + cfg.max_jump;
  const double ratio_lo = 1.0 / ratio_hi;
  std::vector<CycleRecord> cycles;
  auto emit_run = [&](std::size_t begin, std::size_t end) {
    if (static_cast<int>(end - begin) < cfg.min_run) return;
    for (std::size_t k = begin; k < end; ++k) {
      const Candidate& c = candidates[k];
      std::span<const double> span(buf.samples.data() + c.start,
                                   static_cast<std::size_t>(c.length));
      CycleMetrics m;
      try {
        m = ComputeCycleMetrics(span, cfg.spl_offset_db);
      } catch (const SilentCycleError&) {
        continue;
      }
      CycleRecord rec;
      rec.start_sample = c.start;
      rec.length_samples = c.length;
      rec.f0_hz = fs / static_cast<double>(c.length);
      rec.spl_db = m.spl_db;
      rec.crest = m.crest;
      cycles.push_back(rec);
    }
  };

  std::size_t run_begin = 0;
  for (std::size_t k = 1; k <= candidates.size(); ++k) {
    bool continues = false;
    if (k < candidates.size()) {
      const Candidate& prev = candidates[k - 1];
      const Candidate& cur = candidates[k];
      const double ratio = static_cast<double>(cur.length) /
                           static_cast<double>(prev.length);
      continues = cur.start == prev.start + prev.length && ratio >= ratio_lo &&
                  ratio <= ratio_hi;
    }
    if (!continues) {
      emit_run(run_begin, k);
      run_begin = k;
    }
  }
  return cycles;
}

}  // namespace voicemap
