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

#include "voicemap/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace voicemap {
namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(int size) : size_(size), impl_(std::make_unique<Impl>()) {
  if (size < 2 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("RealFft size must be a power of two");
  }
  impl_->real = fftw_alloc_real(size);
  impl_->spec = fftw_alloc_complex(size / 2 + 1);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  impl_->forward = fftw_plan_dft_r2c_1d(size, impl_->real, impl_->spec,
                                        FFTW_ESTIMATE);
  impl_->inverse = fftw_plan_dft_c2r_1d(size, impl_->spec, impl_->real,
                                        FFTW_ESTIMATE);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::Forward(std::span<const double> input,
                      std::span<std::complex<double>> output) {
  if (static_cast<int>(input.size()) > size_ ||
      static_cast<int>(output.size()) < bins()) {
    throw std::invalid_argument("RealFft::Forward: bad buffer sizes");
  }
  std::copy(input.begin(), input.end(), impl_->real);
  std::fill(impl_->real + input.size(), impl_->real + size_, 0.0);
  fftw_execute(impl_->forward);
  for (int k = 0; k < bins(); ++k) {
    output[k] = {impl_->spec[k][0], impl_->spec[k][1]};
  }
}

void RealFft::PowerSpectrum(std::span<const double> input,
                            std::span<double> power) {
  if (static_cast<int>(input.size()) > size_ ||
      static_cast<int>(power.size()) < bins()) {
    throw std::invalid_argument("RealFft::PowerSpectrum: bad buffer sizes");
  }
  std::copy(input.begin(), input.end(), impl_->real);
  std::fill(impl_->real + input.size(), impl_->real + size_, 0.0);
  fftw_execute(impl_->forward);
  for (int k = 0; k < bins(); ++k) {
    const double re = impl_->spec[k][0];
    const double im = impl_->spec[k][1];
    power[k] = re * re + im * im;
  }
}

void RealFft::InverseReal(std::span<const double> half_spectrum,
                          std::span<double> output) {
  if (static_cast<int>(half_spectrum.size()) != bins() ||
      static_cast<int>(output.size()) > size_) {
    throw std::invalid_argument("RealFft::InverseReal: bad buffer sizes");
  }
  for (int k = 0; k < bins(); ++k) {
    impl_->spec[k][0] = half_spectrum[k];
    impl_->spec[k][1] = 0.0;
  }
  fftw_execute(impl_->inverse);
  const double scale = 1.0 / size_;
  for (std::size_t n = 0; n < output.size(); ++n) {
    output[n] = impl_->real[n] * scale;
  }
}

}  // namespace voicemap
