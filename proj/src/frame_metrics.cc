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

#include "voicemap/frame_metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace voicemap {
namespace {

// Frames whose raw values are computed before each serial smoothing pass.
constexpr std::size_t kFrameBlock = 256;

std::vector<double> LogPowerDb(std::span<const double> power) {
  std::vector<double> out(power.size());
  for (std::size_t k = 0; k < power.size(); ++k) {
    out[k] = 10.0 * std::log10(std::max(power[k], kPowerFloor));
  }
  return out;
}

double CepstralPowerDb(double c) {
  return 10.0 * std::log10(std::max(c * c, kCepstralPowerFloor));
}

}  // namespace

int FrameConfig::FrameLength(double sample_rate) const {
  return static_cast<int>(std::lround(frame_len_s * sample_rate));
}

int FrameConfig::Hop(double sample_rate) const {
  return static_cast<int>(std::lround(hop_s * sample_rate));
}

double FrameConfig::FrameRate(double sample_rate) const {
  return sample_rate / Hop(sample_rate);
}

void FrameConfig::Validate(double sample_rate) const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("frame config: " + msg);
  };
  if (!(sample_rate > 0.0)) fail("sample rate must be positive");
  if (fft_size < 4 || (fft_size & (fft_size - 1)) != 0) {
    fail("fft_size must be a power of two");
  }
  if (FrameLength(sample_rate) < 2) fail("frame too short");
  if (FrameLength(sample_rate) > fft_size) fail("frame longer than fft_size");
  if (Hop(sample_rate) < 1) fail("hop must be at least one sample");
  if (cepstrum_bins < 1 || cepstrum_bins > fft_size / 4) {
    fail("cepstrum_bins must be in [1, fft_size / 4]");
  }
  if (cpps_quefrency_avg_bins < 1 || cpps_quefrency_avg_bins % 2 == 0) {
    fail("cpps_quefrency_avg_bins must be odd");
  }
  if (!(cpps_smooth_cutoff_hz > 0.0)) fail("cpps smoothing cutoff");
  if (!(cpps_f0_min_hz > 0.0) || !(cpps_f0_max_hz > cpps_f0_min_hz)) {
    fail("cpps f0 search band");
  }
  if (!(sb_low_edge_hz > 0.0) || !(sb_high_edge_hz >= sb_low_edge_hz) ||
      !(sb_high_edge_hz < sample_rate / 2.0)) {
    fail("spectrum balance band edges");
  }
  if (!(sb_smooth_cutoff_hz > 0.0)) fail("sb smoothing cutoff");
  const QuefrencyRange r = CepstralSearchRange(*this, sample_rate);
  if (r.lo < 1 || r.hi - r.lo < 2) fail("empty cepstral search range");
}

std::vector<double> HannWindow(int len) {
  std::vector<double> w(len);
  if (len == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int n = 0; n < len; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
  }
  return w;
}

FrameStream::FrameStream(const AudioBuffer& buf, const FrameConfig& cfg)
    : buf_(&buf),
      fft_size_(cfg.fft_size),
      frame_len_(cfg.FrameLength(buf.sample_rate)),
      hop_(cfg.Hop(buf.sample_rate)),
      window_(HannWindow(frame_len_)) {
  cfg.Validate(buf.sample_rate);
  const auto n = buf.samples.size();
  if (n >= static_cast<std::size_t>(frame_len_)) {
    count_ = (n - frame_len_) / hop_ + 1;
  }
}

void FrameStream::FillFrame(std::size_t i, std::span<double> out) const {
  const double* x = buf_->samples.data() + i * hop_;
  for (int n = 0; n < frame_len_; ++n) out[n] = x[n] * window_[n];
  std::fill(out.begin() + frame_len_, out.begin() + fft_size_, 0.0);
}

std::vector<double> FrameStream::Frame(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("FrameStream::Frame");
  std::vector<double> out(fft_size_);
  FillFrame(i, out);
  return out;
}

double FrameStream::CenterSeconds(std::size_t i) const {
  return (static_cast<double>(i * hop_) + frame_len_ / 2.0) /
         buf_->sample_rate;
}

QuefrencyRange CepstralSearchRange(const FrameConfig& cfg,
                                   double sample_rate) {
  QuefrencyRange r;
  r.lo = static_cast<int>(std::floor(sample_rate / cfg.cpps_f0_max_hz));
  r.hi = std::min(static_cast<int>(std::floor(sample_rate / cfg.cpps_f0_min_hz)),
                  cfg.cepstrum_bins - 1);
  return r;
}

double SpectrumBalanceFromPower(std::span<const double> power,
                                double sample_rate, const FrameConfig& cfg) {
  const double bin_hz = sample_rate / cfg.fft_size;
  double low = 0.0;
  double high = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    total += power[k];
    if (k > 0 && f < cfg.sb_low_edge_hz) low += power[k];
    if (f > cfg.sb_high_edge_hz) high += power[k];
  }
  const double floor = 1e-12 * (total + 1e-30);
  return 10.0 * std::log10((high + floor) / (low + floor));
}

double SpectrumBalance(std::span<const double> windowed_frame,
                       const FrameConfig& cfg, double sample_rate) {
  RealFft fft(cfg.fft_size);
  std::vector<double> power(fft.bins());
  fft.PowerSpectrum(windowed_frame, power);
  return SpectrumBalanceFromPower(power, sample_rate, cfg);
}

std::vector<double> RealCepstrum(std::span<const double> power, RealFft& fft,
                                 const FrameConfig& cfg) {
  std::vector<double> cepstrum(cfg.cepstrum_bins);
  fft.InverseReal(LogPowerDb(power), cepstrum);
  return cepstrum;
}

double PeakProminence(std::span<const double> cepstrum_db,
                      QuefrencyRange range) {
  const int lo = range.lo;
  const int hi = range.hi;
  int peak = lo;
  for (int q = lo + 1; q <= hi; ++q) {
    if (cepstrum_db[q] > cepstrum_db[peak]) peak = q;
  }
  // Least-squares line y = a + b q over [lo, hi], centered on the mean
  // quefrency for conditioning.
  const double n = hi - lo + 1;
  const double q_mean = (lo + hi) / 2.0;
  double y_mean = 0.0;
  for (int q = lo; q <= hi; ++q) y_mean += cepstrum_db[q];
  y_mean /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int q = lo; q <= hi; ++q) {
    const double dq = q - q_mean;
    sxy += dq * (cepstrum_db[q] - y_mean);
    sxx += dq * dq;
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double baseline = y_mean + slope * (peak - q_mean);
  return cepstrum_db[peak] - baseline;
}

double RawCpp(std::span<const double> cepstrum, QuefrencyRange range) {
  std::vector<double> db(cepstrum.size());
  for (std::size_t q = 0; q < cepstrum.size(); ++q) {
    db[q] = CepstralPowerDb(cepstrum[q]);
  }
  return PeakProminence(db, range);
}

double RawCppFromFrame(std::span<const double> windowed_frame,
                       const FrameConfig& cfg, double sample_rate) {
  RealFft fft(cfg.fft_size);
  std::vector<double> power(fft.bins());
  fft.PowerSpectrum(windowed_frame, power);
  return RawCpp(RealCepstrum(power, fft, cfg),
                CepstralSearchRange(cfg, sample_rate));
}

CppsSmoother::CppsSmoother(const FrameConfig& cfg, double sample_rate)
    : bins_(cfg.cepstrum_bins),
      avg_bins_(cfg.cpps_quefrency_avg_bins),
      beta_(std::exp(-2.0 * std::numbers::pi * cfg.cpps_smooth_cutoff_hz /
                     cfg.FrameRate(sample_rate))),
      range_(CepstralSearchRange(cfg, sample_rate)),
      state_(cfg.cepstrum_bins, 0.0),
      smoothed_db_(cfg.cepstrum_bins, 0.0) {}

double CppsSmoother::Push(std::span<const double> cepstrum) {
  if (static_cast<int>(cepstrum.size()) != bins_) {
    throw std::invalid_argument("CppsSmoother: cepstrum size mismatch");
  }
  for (int q = 0; q < bins_; ++q) {
    const double p = cepstrum[q] * cepstrum[q];
    state_[q] = primed_ ? (1.0 - beta_) * p + beta_ * state_[q] : p;
  }
  primed_ = true;

  const int half = avg_bins_ / 2;
  for (int q = 0; q < bins_; ++q) {
    const int lo = std::max(0, q - half);
    const int hi = std::min(bins_ - 1, q + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += state_[j];
    const double mean = sum / (hi - lo + 1);
    smoothed_db_[q] = 10.0 * std::log10(std::max(mean, kCepstralPowerFloor));
  }
  return PeakProminence(smoothed_db_, range_);
}

SbSmoother::SbSmoother(const FrameConfig& cfg, double sample_rate)
    : cutoff_hz_(std::min(cfg.sb_smooth_cutoff_hz,
                          kMaxSmootherCutoffFraction *
                              cfg.FrameRate(sample_rate))),
      filter_(FilterSpec{FilterKind::kLowpassButterworth4, cutoff_hz_,
                         cfg.FrameRate(sample_rate)}) {}

double SbSmoother::Push(double sb_db) {
  if (!primed_) {
    filter_.ResetToSteadyState(sb_db);
    primed_ = true;
  }
  return filter_.Process(sb_db);
}

std::vector<MetricFrame> ComputeFrameMetrics(const AudioBuffer& buf,
                                             const FrameConfig& cfg) {
  const FrameStream stream(buf, cfg);
  const double fs = buf.sample_rate;
  RealFft fft(cfg.fft_size);
  CppsSmoother cpps(cfg, fs);
  SbSmoother sb(cfg, fs);

  std::vector<MetricFrame> frames(stream.size());
  std::vector<double> frame(cfg.fft_size);
  std::vector<double> power(fft.bins());
  std::vector<double> raw_sb;
  std::vector<std::vector<double>> raw_cepstra;
  for (std::size_t block = 0; block < stream.size(); block += kFrameBlock) {
    const std::size_t end = std::min(stream.size(), block + kFrameBlock);
    raw_sb.clear();
    raw_cepstra.clear();
    for (std::size_t i = block; i < end; ++i) {
      stream.FillFrame(i, frame);
      fft.PowerSpectrum(frame, power);
      raw_sb.push_back(SpectrumBalanceFromPower(power, fs, cfg));
      raw_cepstra.push_back(RealCepstrum(power, fft, cfg));
    }
    for (std::size_t i = block; i < end; ++i) {
      MetricFrame& f = frames[i];
      f.center_s = stream.CenterSeconds(i);
      f.sb_db = sb.Push(raw_sb[i - block]);
      f.cpps_db = cpps.Push(raw_cepstra[i - block]);
    }
  }
  return frames;
}

std::vector<CycleRecord> AttachFramesToCycles(
    std::vector<CycleRecord> cycles, std::span<const MetricFrame> frames,
    double max_distance_s, int sample_rate) {
  // Distances closer than this are a tie.
  constexpr double kTieEpsilon = 1e-12;
  for (CycleRecord& c : cycles) {
    c.cpps_db.reset();
    c.sb_db.reset();
    if (frames.empty()) continue;
    const double t = c.midpoint_seconds(sample_rate);
    auto it = std::lower_bound(
        frames.begin(), frames.end(), t,
        [](const MetricFrame& f, double v) { return f.center_s < v; });
    const MetricFrame* best = nullptr;
    double best_dist = 0.0;
    if (it != frames.begin()) {
      best = &*(it - 1);
      best_dist = t - best->center_s;
    }
    if (it != frames.end()) {
      const double d = it->center_s - t;
      if (best == nullptr || d < best_dist - kTieEpsilon) {
        best = &*it;
        best_dist = d;
      }
    }
    if (best_dist <= max_distance_s + kTieEpsilon) {
      c.cpps_db = best->cpps_db;
      c.sb_db = best->sb_db;
    }
  }
  return cycles;
}

}  // namespace voicemap
