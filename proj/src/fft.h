// src/fft.h

// Copyright 2026  roomlab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ROOMLAB_SRC_FFT_H_
#define ROOMLAB_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace roomlab {
namespace internal {

// Real-to-complex transform of fixed size backed by FFTW. Plans are created
// under a process-wide lock; an instance owns its buffers and must not be
// shared between threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  // Input shorter than size() is zero padded.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse (scaled by size()).
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  void* spec_;
  void* forward_;
  void* inverse_;
};

}  // namespace internal
}  // namespace roomlab

#endif  // ROOMLAB_SRC_FFT_H_
