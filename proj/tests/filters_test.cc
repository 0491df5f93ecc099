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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <span>

#include "test_support.h"
#include "voicemap/cycle_detector.h"

namespace voicemap {
namespace {

using testing::MakeBuffer;
using testing::Rms;
using testing::Sine;

constexpr double kFs = 44100.0;

// |H| of an order-n Butterworth prototype mapped by the bilinear transform
// with the cutoff prewarped: the digital response equals the analog one at
// warped frequency tan(w / 2).
double AnalyticHighpass(double f, double fc, int order) {
  const double w = std::tan(std::numbers::pi * f / kFs);
  const double wc = std::tan(std::numbers::pi * fc / kFs);
  return 1.0 / std::sqrt(1.0 + std::pow(wc / w, 2 * order));
}

double AnalyticLowpass(double f, double fc, double fs, int order) {
  const double w = std::tan(std::numbers::pi * f / fs);
  const double wc = std::tan(std::numbers::pi * fc / fs);
  return 1.0 / std::sqrt(1.0 + std::pow(w / wc, 2 * order));
}

double Db(double r) { return 20.0 * std::log10(r); }

// Interior RMS ratio in dB, skipping the first and last 0.25 s.
double SteadyGainDb(const std::vector<double>& in,
                    const std::vector<double>& out) {
  const std::size_t skip = static_cast<std::size_t>(0.25 * kFs);
  const auto a = std::span(in).subspan(skip, in.size() - 2 * skip);
  const auto b = std::span(out).subspan(skip, out.size() - 2 * skip);
  return Db(Rms(b) / Rms(a));
}

TEST(HighpassTest, RejectsDc) {
  const std::vector<double> dc(static_cast<std::size_t>(kFs), 0.5);
  const AudioBuffer out = Highpass50Hz(MakeBuffer(dc));
  const auto tail = std::span(out.samples).last(4410);
  EXPECT_LT(Rms(tail), 0.0005);
}

TEST(HighpassTest, PassesOneKilohertz) {
  const auto x = Sine(1000.0, 0.5, 2.0);
  const AudioBuffer out = Highpass50Hz(MakeBuffer(x));
  const double expected = Db(AnalyticHighpass(1000.0, 50.0, 2));
  EXPECT_NEAR(SteadyGainDb(x, out.samples), expected, 0.05);
  EXPECT_NEAR(SteadyGainDb(x, out.samples), 0.0, 0.05);
}

TEST(HighpassTest, MinusThreeDbAtCutoff) {
  const auto x = Sine(50.0, 0.5, 2.0);
  const AudioBuffer out = Highpass50Hz(MakeBuffer(x));
  EXPECT_NEAR(SteadyGainDb(x, out.samples), -3.0103, 0.1);
}

TEST(HighpassTest, DesignMatchesAnalyticMagnitude) {
  const IirFilter hp(FilterSpec{FilterKind::kHighpassButterworth2, 50.0, kFs});
  for (double f : {10.0, 25.0, 50.0, 100.0, 440.0, 5000.0, 20000.0}) {
    EXPECT_NEAR(hp.MagnitudeAt(f, kFs), AnalyticHighpass(f, 50.0, 2), 1e-9)
        << f;
  }
}

TEST(LowpassTest, FourthOrderMatchesAnalyticMagnitude) {
  const double fs = 100.0;
  const IirFilter lp(FilterSpec{FilterKind::kLowpassButterworth4, 16.0, fs});
  ASSERT_EQ(lp.sections().size(), 2u);
  for (double f : {0.5, 5.0, 16.0, 30.0, 45.0}) {
    EXPECT_NEAR(lp.MagnitudeAt(f, fs), AnalyticLowpass(f, 16.0, fs, 4), 1e-9)
        << f;
  }
}

TEST(LowpassTest, SteadyStatePrimingHoldsConstant) {
  IirFilter lp(FilterSpec{FilterKind::kLowpassButterworth4, 20.0, 100.0});
  lp.ResetToSteadyState(-17.5);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(lp.Process(-17.5), -17.5, 1e-9);
}

TEST(OnePoleTest, ImpulseResponseIsGeometric) {
  IirFilter lp(FilterSpec{FilterKind::kOnePoleLowpass, 16.0, 100.0});
  const double beta = std::exp(-2.0 * std::numbers::pi * 16.0 / 100.0);
  double expected = 1.0 - beta;
  EXPECT_NEAR(lp.Process(1.0), expected, 1e-15);
  for (int i = 0; i < 10; ++i) {
    expected *= beta;
    EXPECT_NEAR(lp.Process(0.0), expected, 1e-15);
  }
}

TEST(FilterSpecTest, RejectsCutoffAtOrAboveNyquist) {
  EXPECT_THROW(
      (FilterSpec{FilterKind::kLowpassButterworth4, 50.0, 100.0}.Validate()),
      std::invalid_argument);
  EXPECT_THROW(
      (FilterSpec{FilterKind::kHighpassButterworth2, 0.0, 100.0}.Validate()),
      std::invalid_argument);
  EXPECT_NO_THROW(
      (FilterSpec{FilterKind::kLowpassButterworth4, 49.0, 100.0}.Validate()));
}

TEST(FilterTest, ResetClearsState) {
  IirFilter hp(FilterSpec{FilterKind::kHighpassButterworth2, 50.0, kFs});
  const double first = hp.Process(1.0);
  hp.Process(0.3);
  hp.Reset();
  EXPECT_EQ(hp.Process(1.0), first);
}

TEST(LeakyIntegratorTest, ZeroInZeroOut) {
  const AudioBuffer out =
      LeakyIntegrate(MakeBuffer(std::vector<double>(1000, 0.0)));
  for (double v : out.samples) EXPECT_EQ(v, 0.0);
}

TEST(LeakyIntegratorTest, ImpulseResponse) {
  std::vector<double> x(5000, 0.0);
  x[0] = 1.0;
  const AudioBuffer out = LeakyIntegrate(MakeBuffer(x));
  for (std::size_t n = 0; n < x.size(); n += 97) {
    EXPECT_NEAR(out.samples[n], std::pow(0.999, n), 1e-12) << n;
  }
}

TEST(LeakyIntegratorTest, StepResponse) {
  const std::vector<double> x(20000, 1.0);
  const AudioBuffer out = LeakyIntegrate(MakeBuffer(x));
  for (std::size_t n = 0; n < x.size(); n += 331) {
    const double expected = (1.0 - std::pow(0.999, n + 1)) / (1.0 - 0.999);
    EXPECT_NEAR(out.samples[n], expected, 1e-9 * expected) << n;
  }
  EXPECT_NEAR(out.samples.back(), 1000.0, 1e-3);
}

TEST(LeakyIntegratorTest, RejectsUnstableAlpha) {
  EXPECT_THROW(LeakyIntegrate(MakeBuffer({1.0}), 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace voicemap
