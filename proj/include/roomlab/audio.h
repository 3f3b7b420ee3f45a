// include/roomlab/audio.h

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

#ifndef ROOMLAB_AUDIO_H_
#define ROOMLAB_AUDIO_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roomlab {

/// Sample rate every corpus is expected to arrive at. Nothing in the
/// toolkit resamples.
inline constexpr int kPipelineSampleRate = 16000;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mono waveform. Samples are non-empty and finite; the rate is positive.
class AudioClip {
 public:
  AudioClip(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  /// Releases the sample buffer; the clip is left in a moved-from state.
  std::vector<double> TakeSamples() && { return std::move(samples_); }

  bool operator==(const AudioClip&) const = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

/// Room impulse response with optional room metadata.
/// Construction rejects responses with zero total energy.
class Rir {
 public:
  explicit Rir(AudioClip clip, std::optional<double> volume = std::nullopt,
               std::optional<double> source_distance = std::nullopt);

  const AudioClip& clip() const { return clip_; }
  std::span<const double> samples() const { return clip_.samples(); }
  int sample_rate() const { return clip_.sample_rate(); }
  std::size_t size() const { return clip_.size(); }

  /// Room volume in m^3.
  const std::optional<double>& volume() const { return volume_; }
  /// Source-receiver distance in m.
  const std::optional<double>& source_distance() const {
    return source_distance_;
  }

  double energy() const { return energy_; }

 private:
  AudioClip clip_;
  std::optional<double> volume_;
  std::optional<double> source_distance_;
  double energy_;
};

/// Rejects clips that are not at the pipeline rate.
void RequirePipelineRate(const AudioClip& clip, const std::string& what);

double Energy(std::span<const double> x);
double MeanPower(std::span<const double> x);

}  // namespace roomlab

#endif  // ROOMLAB_AUDIO_H_
