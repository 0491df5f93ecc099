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

#include "voicemap/filters.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace voicemap {
namespace {

// Q of the two second-order sections of a 4th-order Butterworth.
constexpr double kButterworth4Q1 = 0.54119610014619698;
constexpr double kButterworth4Q2 = 1.3065629648763766;

double Prewarp(double cutoff_hz, double sample_rate) {
  return std::tan(std::numbers::pi * cutoff_hz / sample_rate);
}

}  // namespace

void FilterSpec::Validate() const {
  if (!(sample_rate > 0.0) || !(cutoff_hz > 0.0) ||
      !(cutoff_hz < sample_rate / 2.0)) {
    throw std::invalid_argument(
        "filter cutoff " + std::to_string(cutoff_hz) +
        " Hz outside (0, fs/2) for fs = " + std::to_string(sample_rate));
  }
}

double Biquad::MagnitudeAt(double freq_hz, double sample_rate) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2));
}

Biquad ButterworthHighpass2(double cutoff_hz, double sample_rate) {
  const double k = Prewarp(cutoff_hz, sample_rate);
  const double q = std::numbers::sqrt2 / 2.0;
  const double norm = 1.0 / (1.0 + k / q + k * k);
  Biquad bq;
  bq.b0 = norm;
  bq.b1 = -2.0 * norm;
  bq.b2 = norm;
  bq.a1 = 2.0 * (k * k - 1.0) * norm;
  bq.a2 = (1.0 - k / q + k * k) * norm;
  return bq;
}

Biquad ButterworthLowpass2(double cutoff_hz, double sample_rate, double q) {
  const double k = Prewarp(cutoff_hz, sample_rate);
  const double norm = 1.0 / (1.0 + k / q + k * k);
  Biquad bq;
  bq.b0 = k * k * norm;
  bq.b1 = 2.0 * bq.b0;
  bq.b2 = bq.b0;
  bq.a1 = 2.0 * (k * k - 1.0) * norm;
  bq.a2 = (1.0 - k / q + k * k) * norm;
  return bq;
}

Biquad OnePoleLowpass(double cutoff_hz, double sample_rate) {
  const double beta =
      std::exp(-2.0 * std::numbers::pi * cutoff_hz / sample_rate);
  Biquad bq;
  bq.b0 = 1.0 - beta;
  bq.a1 = -beta;
  return bq;
}

IirFilter::IirFilter(const FilterSpec& spec) {
  spec.Validate();
  switch (spec.kind) {
    case FilterKind::kHighpassButterworth2:
      sections_.push_back(ButterworthHighpass2(spec.cutoff_hz, spec.sample_rate));
      break;
    case FilterKind::kLowpassButterworth4:
      sections_.push_back(ButterworthLowpass2(spec.cutoff_hz, spec.sample_rate,
                                              kButterworth4Q1));
      sections_.push_back(ButterworthLowpass2(spec.cutoff_hz, spec.sample_rate,
                                              kButterworth4Q2));
      break;
    case FilterKind::kOnePoleLowpass:
      sections_.push_back(OnePoleLowpass(spec.cutoff_hz, spec.sample_rate));
      break;
  }
  state_.resize(sections_.size());
}

IirFilter::IirFilter(std::vector<Biquad> sections)
    : sections_(std::move(sections)), state_(sections_.size()) {}

double IirFilter::Process(double x) {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& c = sections_[i];
    State& s = state_[i];
    const double y = c.b0 * x + s.s1;
    s.s1 = c.b1 * x - c.a1 * y + s.s2;
    s.s2 = c.b2 * x - c.a2 * y;
    x = y;
  }
  return x;
}

std::vector<double> IirFilter::Process(std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) y[n] = Process(x[n]);
  return y;
}

void IirFilter::Reset() {
  for (State& s : state_) s = State{};
}

void IirFilter::ResetToSteadyState(double x) {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& c = sections_[i];
    const double dc_gain = (c.b0 + c.b1 + c.b2) / (1.0 + c.a1 + c.a2);
    const double y = dc_gain * x;
    State& s = state_[i];
    s.s2 = c.b2 * x - c.a2 * y;
    s.s1 = c.b1 * x - c.a1 * y + s.s2;
    x = y;
  }
}

double IirFilter::MagnitudeAt(double freq_hz, double sample_rate) const {
  double mag = 1.0;
  for (const Biquad& c : sections_) mag *= c.MagnitudeAt(freq_hz, sample_rate);
  return mag;
}

}  // namespace voicemap
