// src/fft.cc

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

#include "fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace roomlab {
namespace internal {

namespace {
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  real_ = fftw_alloc_real(n_);
  auto* spec = fftw_alloc_complex(num_bins());
  spec_ = spec;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_, spec,
                                  FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec, real_,
                                  FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::size_t m = std::min(in.size(), n_);
  std::copy_n(in.begin(), m, real_);
  std::fill(real_ + m, real_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_));
  std::memcpy(out.data(), spec_, num_bins() * sizeof(fftw_complex));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  // c2r destroys its input, so always work on the owned buffer.
  std::memcpy(spec_, in.data(), num_bins() * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inverse_));
  std::copy_n(real_, std::min(out.size(), n_), out.begin());
}

}  // namespace internal
}  // namespace roomlab
