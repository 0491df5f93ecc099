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

#ifndef VOICEMAP_FFT_H_
#define VOICEMAP_FFT_H_

#include <complex>
#include <memory>
#include <span>

namespace voicemap {

// Real-input FFT of a fixed power-of-two size, backed by FFTW. Each object
// owns its plans and work buffers: use one instance per thread.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  // X[k] = sum_n x[n] exp(-2 pi i k n / N), k = 0..N/2. `input` may be
  // shorter than size(); it is zero-padded.
  void Forward(std::span<const double> input,
               std::span<std::complex<double>> output);

  // Power spectrum |X[k]|^2, k = 0..N/2.
  void PowerSpectrum(std::span<const double> input, std::span<double> power);

  // Inverse of a Hermitian spectrum whose half-spectrum is real:
  // x[n] = (1/N) sum_k S[k] exp(2 pi i k n / N), n = 0..N-1.
  void InverseReal(std::span<const double> half_spectrum,
                   std::span<double> output);

 private:
  struct Impl;
  int size_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace voicemap

#endif  // VOICEMAP_FFT_H_
