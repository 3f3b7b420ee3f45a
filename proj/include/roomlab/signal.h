// include/roomlab/signal.h

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

#ifndef ROOMLAB_SIGNAL_H_
#define ROOMLAB_SIGNAL_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "roomlab/audio.h"

namespace roomlab {

inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

/// Decay-curve values below this level are clamped to it.
inline constexpr double kDecayFloorDb = -120.0;

/// Schroeder energy-decay curve. values_db[0] is 0 dB and the sequence is
/// non-increasing.
struct DecayCurve {
  std::vector<double> values_db;
  int sample_rate = kPipelineSampleRate;

  double TimeAt(std::size_t i) const {
    return static_cast<double>(i) / sample_rate;
  }
};

/// Full linear convolution, length x.size() + h.size() - 1. Large inputs go
/// through an FFT; the result agrees with the direct sum to ~1e-12 relative.
std::vector<double> Convolve(std::span<const double> x,
                             std::span<const double> h);

AudioClip Convolve(const AudioClip& x, const Rir& h);

/// Repeats (or truncates) noise to exactly `length` samples.
std::vector<double> TileToLength(std::span<const double> noise,
                                 std::size_t length);

/// Gain g for which P_signal / (g^2 P_noise) equals snr_db.
double SnrNoiseGain(double signal_power, double noise_power, double snr_db);

/// signal + g * noise, with the noise tiled to the signal length and g chosen
/// so the two addends sit at snr_db. kInfiniteSnr returns the signal as is.
AudioClip MixAtSnr(const AudioClip& signal, const AudioClip& noise,
                   double snr_db);

/// Scales so that max |sample| is exactly 1.
AudioClip PeakNormalize(const AudioClip& x);

DecayCurve SchroederDecay(const Rir& h);
DecayCurve SchroederDecay(std::span<const double> h, int sample_rate);

}  // namespace roomlab

#endif  // ROOMLAB_SIGNAL_H_
