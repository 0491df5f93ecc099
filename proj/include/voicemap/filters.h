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

#ifndef VOICEMAP_FILTERS_H_
#define VOICEMAP_FILTERS_H_

#include <span>
#include <vector>

namespace voicemap {

enum class FilterKind {
  kHighpassButterworth2,
  kLowpassButterworth4,
  kOnePoleLowpass,
};

struct FilterSpec {
  FilterKind kind = FilterKind::kHighpassButterworth2;
  double cutoff_hz = 0.0;
  double sample_rate = 0.0;

  // Throws std::invalid_argument unless 0 < cutoff_hz < sample_rate / 2.
  void Validate() const;
};

// Transposed direct form II section. a0 is normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  double MagnitudeAt(double freq_hz, double sample_rate) const;
};

// Bilinear-transform designs with frequency prewarping, so the -3 dB point
// lands exactly on the cutoff.
Biquad ButterworthHighpass2(double cutoff_hz, double sample_rate);
Biquad ButterworthLowpass2(double cutoff_hz, double sample_rate, double q);
// y[n] = (1 - beta) x[n] + beta y[n-1], beta = exp(-2 pi fc / fs).
Biquad OnePoleLowpass(double cutoff_hz, double sample_rate);

// A cascade of biquads with its own state. Copyable; each copy filters
// independently.
class IirFilter {
 public:
  explicit IirFilter(const FilterSpec& spec);
  explicit IirFilter(std::vector<Biquad> sections);

  double Process(double x);
  std::vector<double> Process(std::span<const double> x);

  void Reset();
  // Sets the state to the steady state for a constant input `x`, so a
  // stream starting at `x` produces no start-up transient.
  void ResetToSteadyState(double x);

  double MagnitudeAt(double freq_hz, double sample_rate) const;
  const std::vector<Biquad>& sections() const { return sections_; }

 private:
  struct State {
    double s1 = 0.0, s2 = 0.0;
  };
  std::vector<Biquad> sections_;
  std::vector<State> state_;
};

}  // namespace voicemap

#endif  // VOICEMAP_FILTERS_H_
