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

#ifndef VOICEMAP_FRAME_METRICS_H_
#define VOICEMAP_FRAME_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "voicemap/audio_buffer.h"
#include "voicemap/cycle_detector.h"
#include "voicemap/fft.h"
#include "voicemap/filters.h"

namespace voicemap {

// Floor applied to |X(k)|^2 before taking logarithms.
inline constexpr double kPowerFloor = 1e-30;
// Floor applied to squared cepstral coefficients before conversion to dB.
inline constexpr double kCepstralPowerFloor = 1e-20;
// The SB smoother cutoff is limited to this fraction of the frame rate.
inline constexpr double kMaxSmootherCutoffFraction = 0.49;

struct FrameConfig {
  double frame_len_s = 0.023;
  double hop_s = 0.010;
  int fft_size = 2048;
  int cepstrum_bins = 512;
  double cpps_smooth_cutoff_hz = 16.0;
  int cpps_quefrency_avg_bins = 7;
  // CPP peak search covers periods 1/cpps_f0_max_hz .. 1/cpps_f0_min_hz,
  // clipped to the stored cepstrum.
  double cpps_f0_min_hz = 55.0;
  double cpps_f0_max_hz = 880.0;
  // SB compares (sb_high_edge_hz, Nyquist] against (0, sb_low_edge_hz).
  double sb_low_edge_hz = 1500.0;
  double sb_high_edge_hz = 2000.0;
  double sb_smooth_cutoff_hz = 50.0;

  int FrameLength(double sample_rate) const;
  int Hop(double sample_rate) const;
  double FrameRate(double sample_rate) const;

  // Throws std::invalid_argument on an inconsistent configuration.
  void Validate(double sample_rate) const;
};

struct MetricFrame {
  double center_s = 0.0;
  double sb_db = 0.0;
  double cpps_db = 0.0;
};

// Hann-windowed analysis frames that lie entirely inside the buffer,
// zero-padded to fft_size. Frames are produced on demand; the stream keeps
// a reference to `buf`, which must outlive it.
class FrameStream {
 public:
  FrameStream(const AudioBuffer& buf, const FrameConfig& cfg);

  std::size_t size() const { return count_; }
  int frame_length() const { return frame_len_; }
  int hop() const { return hop_; }

  std::vector<double> Frame(std::size_t i) const;
  void FillFrame(std::size_t i, std::span<double> out) const;
  double CenterSeconds(std::size_t i) const;

 private:
  const AudioBuffer* buf_;
  int fft_size_;
  int frame_len_;
  int hop_;
  std::size_t count_ = 0;
  std::vector<double> window_;
};

// Symmetric Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / (len - 1)).
std::vector<double> HannWindow(int len);

// Inclusive quefrency-bin range searched for the cepstral peak.
struct QuefrencyRange {
  int lo = 0;
  int hi = 0;
};
QuefrencyRange CepstralSearchRange(const FrameConfig& cfg, double sample_rate);

// SB of one frame from its power spectrum (fft_size / 2 + 1 bins):
// 10 log10(W_high / W_low), each band padded by 1e-12 * (energy + 1e-30).
double SpectrumBalanceFromPower(std::span<const double> power,
                                double sample_rate, const FrameConfig& cfg);

// SB of one windowed frame (unsmoothed).
double SpectrumBalance(std::span<const double> windowed_frame,
                       const FrameConfig& cfg, double sample_rate);

// Real cepstrum of the dB log-power spectrum, quefrency bins
// 0..cfg.cepstrum_bins-1. `fft` must have size cfg.fft_size.
std::vector<double> RealCepstrum(std::span<const double> power, RealFft& fft,
                                 const FrameConfig& cfg);

// Peak of `cepstrum_db` over `range` (first maximum, no interpolation)
// minus the least-squares line through the same range, evaluated at the
// peak. Returns 0 for a flat cepstrum.
double PeakProminence(std::span<const double> cepstrum_db,
                      QuefrencyRange range);

// Unsmoothed CPP of one cepstrum: coefficients are converted to power dB,
// 10 log10(c^2), and passed to PeakProminence.
double RawCpp(std::span<const double> cepstrum, QuefrencyRange range);

// Unsmoothed CPP of one windowed frame.
double RawCppFromFrame(std::span<const double> windowed_frame,
                       const FrameConfig& cfg, double sample_rate);

// Smoothed CPP over a stream of cepstra. Each quefrency bin's squared
// coefficient runs through a one-pole low-pass at the frame rate, then a
// centered moving average over cpps_quefrency_avg_bins (truncated at the
// edges); the result is converted to dB before PeakProminence. The first
// frame initializes the smoother state.
class CppsSmoother {
 public:
  CppsSmoother(const FrameConfig& cfg, double sample_rate);

  double Push(std::span<const double> cepstrum);
  void Reset() { primed_ = false; }

  double beta() const { return beta_; }
  // Smoothed power cepstrum in dB from the last Push.
  const std::vector<double>& smoothed_db() const { return smoothed_db_; }

 private:
  int bins_;
  int avg_bins_;
  double beta_;
  QuefrencyRange range_;
  bool primed_ = false;
  std::vector<double> state_;
  std::vector<double> smoothed_db_;
};

// 4th-order Butterworth low-pass over the per-frame SB stream. The cutoff
// is limited to kMaxSmootherCutoffFraction of the frame rate; the first
// value primes the filter at steady state.
class SbSmoother {
 public:
  SbSmoother(const FrameConfig& cfg, double sample_rate);

  double Push(double sb_db);
  double effective_cutoff_hz() const { return cutoff_hz_; }

 private:
  double cutoff_hz_;
  IirFilter filter_;
  bool primed_ = false;
};

// Frame-level SB and CPPs for a whole buffer. Raw per-frame values are
// computed first; the two temporal smoothers then run serially in frame
// order.
std::vector<MetricFrame> ComputeFrameMetrics(const AudioBuffer& buf,
                                             const FrameConfig& cfg = {});

// Gives each cycle the SB and CPPs of the frame whose center is nearest to
// the cycle midpoint (earlier frame on ties), if that distance is at most
// max_distance_s. Otherwise the cycle's frame metrics are left empty.
std::vector<CycleRecord> AttachFramesToCycles(
    std::vector<CycleRecord> cycles, std::span<const MetricFrame> frames,
    double max_distance_s, int sample_rate);

}  // namespace voicemap

#endif  // VOICEMAP_FRAME_METRICS_H_
