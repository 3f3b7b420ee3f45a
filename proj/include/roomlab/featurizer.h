// include/roomlab/featurizer.h

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

#ifndef ROOMLAB_FEATURIZER_H_
#define ROOMLAB_FEATURIZER_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "roomlab/audio.h"

namespace roomlab {

enum class FeatureKind { kSpectrogram, kMel, kMfcc, kGammatone };

std::string KindName(FeatureKind kind);
FeatureKind ParseKind(const std::string& name);

/// Every kind shares the framing: periodic Hann window of 1024 samples, hop
/// 256 (75% overlap), no padding, 128 output bins.
struct FeatureConfig {
  std::size_t window = 1024;
  std::size_t hop = 256;
  std::size_t bins = 128;
  double log_floor = 1e-10;
  double gammatone_low_hz = 50.0;
};

/// bins x frames, row-major by frequency.
struct FeatureMatrix {
  FeatureKind kind = FeatureKind::kSpectrogram;
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::size_t hop = 0;
  std::size_t window = 0;
  int sample_rate = 0;
  std::vector<double> values;

  double at(std::size_t bin, std::size_t frame) const {
    return values[bin * frames + frame];
  }
  double& at(std::size_t bin, std::size_t frame) {
    return values[bin * frames + frame];
  }
};

/// floor((length - window) / hop) + 1; throws for length < window.
std::size_t NumFrames(std::size_t length, const FeatureConfig& cfg = {});

/// One-sided power spectrum of every windowed frame, window/2 + 1 bins
/// scaled so each frame sums to its windowed energy sum_n (w[n] x[n])^2.
/// Indexed [frame][bin].
std::vector<std::vector<double>> FramePowerSpectra(const AudioClip& x,
                                                   const FeatureConfig& cfg = {});

/// Windowed energy sum_n (w[n] x[n])^2 of every frame.
std::vector<double> FrameEnergies(const AudioClip& x,
                                  const FeatureConfig& cfg = {});

/// Center frequency in Hz of each output bin (the DCT index for MFCC).
std::vector<double> BinCenters(FeatureKind kind, int sample_rate,
                               const FeatureConfig& cfg = {});

FeatureMatrix Featurize(const AudioClip& x, FeatureKind kind,
                        const FeatureConfig& cfg = {});

/// Writes <stem>.f32 (little-endian float32, bins x frames row-major) and
/// <stem>.json {kind, shape, hop, window, sample_rate, dtype, layout}.
void WriteFeatures(const std::filesystem::path& stem, const FeatureMatrix& m);

FeatureMatrix ReadFeatures(const std::filesystem::path& stem);

}  // namespace roomlab

#endif  // ROOMLAB_FEATURIZER_H_
