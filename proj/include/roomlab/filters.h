// include/roomlab/filters.h

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

#ifndef ROOMLAB_FILTERS_H_
#define ROOMLAB_FILTERS_H_

#include <complex>
#include <span>
#include <vector>

namespace roomlab {

/// y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

using BiquadCascade = std::vector<Biquad>;

/// Fourth-order Butterworth band-pass covering one octave around
/// center_hz (edges at center/sqrt(2) and center*sqrt(2)). When the upper
/// edge is at or beyond 95% of Nyquist the band becomes a fourth-order
/// Butterworth high-pass at the lower edge.
BiquadCascade DesignOctaveBand(double center_hz, int sample_rate);

/// Runs the cascade from rest over x. Output has the length of x.
std::vector<double> Filter(const BiquadCascade& cascade,
                           std::span<const double> x);

/// Complex frequency response of the cascade at frequency_hz.
std::complex<double> FrequencyResponse(const BiquadCascade& cascade,
                                       double frequency_hz, int sample_rate);

}  // namespace roomlab

#endif  // ROOMLAB_FILTERS_H_
