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

#include "voicemap/resampler.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace voicemap {
namespace {

constexpr double kKaiserBeta = 8.0;
// Passband edge as a fraction of the narrower Nyquist frequency.
constexpr double kRolloff = 0.97;
// Above this many phases the kernel is evaluated per output sample instead
// of tabulated.
constexpr std::int64_t kMaxTabulatedPhases = 4096;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

class SincKernel {
 public:
  SincKernel(double cutoff, int half_width)
      : cutoff_(cutoff),
        half_width_(half_width),
        norm_(1.0 / std::cyl_bessel_i(0.0, kKaiserBeta)) {}

  int half_width() const { return half_width_; }

  // Fills `taps` (size 2 * half_width) for an output instant that lies
  // `frac` input samples after input index n0; tap j pairs with input
  // n0 - half_width + 1 + j. Taps are normalized to unit DC gain.
  void Fill(double frac, std::vector<double>& taps) const {
    taps.resize(2 * half_width_);
    double sum = 0.0;
    for (int j = 0; j < 2 * half_width_; ++j) {
      const double d = (j - half_width_ + 1) - frac;
      const double r = d / half_width_;
      double w = 0.0;
      if (std::abs(r) < 1.0) {
        w = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) *
            norm_;
      }
      taps[j] = 2.0 * cutoff_ * Sinc(2.0 * cutoff_ * d) * w;
      sum += taps[j];
    }
    for (double& t : taps) t /= sum;
  }

 private:
  double cutoff_;
  int half_width_;
  double norm_;
};

}  // namespace

AudioBuffer Resample(const AudioBuffer& buf, int target_rate) {
  if (buf.sample_rate <= 0 || target_rate <= 0) {
    throw std::invalid_argument("Resample: sample rates must be positive");
  }
  if (buf.sample_rate == target_rate) return buf;

  const std::int64_t g = std::gcd(buf.sample_rate, target_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = buf.sample_rate / g;
  const double ratio = static_cast<double>(target_rate) / buf.sample_rate;
  const double band = std::min(1.0, ratio);
  const SincKernel kernel(0.5 * band * kRolloff,
                          static_cast<int>(std::ceil(kSincHalfWidth / band)));
  const int hw = kernel.half_width();

  const auto n_in = static_cast<std::int64_t>(buf.samples.size());
  const std::int64_t n_out = (n_in * up + down / 2) / down;

  std::vector<std::vector<double>> table;
  if (up <= kMaxTabulatedPhases) {
    table.resize(up);
    for (std::int64_t p = 0; p < up; ++p) {
      kernel.Fill(static_cast<double>(p) / up, table[p]);
    }
  }

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.source_id = buf.source_id;
  out.samples.resize(n_out);
  std::vector<double> scratch;
  const double* x = buf.samples.data();
  for (std::int64_t m = 0; m < n_out; ++m) {
    const std::int64_t pos = m * down;
    const std::int64_t n0 = pos / up;
    const std::int64_t phase = pos % up;
    const std::vector<double>* taps;
    if (!table.empty()) {
      taps = &table[phase];
    } else {
      kernel.Fill(static_cast<double>(phase) / up, scratch);
      taps = &scratch;
    }
    const std::int64_t first = n0 - hw + 1;
    const std::int64_t j_lo = std::max<std::int64_t>(0, -first);
    const std::int64_t j_hi = std::min<std::int64_t>(2 * hw, n_in - first);
    double acc = 0.0;
    for (std::int64_t j = j_lo; j < j_hi; ++j) {
      acc += (*taps)[j] * x[first + j];
    }
    out.samples[m] = acc;
  }
  return out;
}

}  // namespace voicemap
