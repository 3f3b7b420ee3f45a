// src/audio.cc

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

#include "roomlab/audio.h"

#include <cmath>
#include <numeric>
#include <sstream>

namespace roomlab {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error("AudioClip: sample rate must be positive, got " +
                std::to_string(sample_rate_));
  }
  if (samples_.empty()) throw Error("AudioClip: empty sample sequence");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error("AudioClip: non-finite sample at index " +
                  std::to_string(i));
    }
  }
}

Rir::Rir(AudioClip clip, std::optional<double> volume,
         std::optional<double> source_distance)
    : clip_(std::move(clip)),
      volume_(volume),
      source_distance_(source_distance),
      energy_(Energy(clip_.samples())) {
  if (!(energy_ > 0.0)) throw Error("Rir: zero-energy impulse response");
  if (volume_ && !(*volume_ > 0.0)) throw Error("Rir: volume must be > 0");
  if (source_distance_ && !(*source_distance_ > 0.0))
    throw Error("Rir: source distance must be > 0");
}

void RequirePipelineRate(const AudioClip& clip, const std::string& what) {
  if (clip.sample_rate() != kPipelineSampleRate) {
    std::ostringstream os;
    os << what << ": sample rate " << clip.sample_rate() << " Hz, expected "
       << kPipelineSampleRate << " Hz (resampling is not supported)";
    throw Error(os.str());
  }
}

double Energy(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

double MeanPower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return Energy(x) / static_cast<double>(x.size());
}

}  // namespace roomlab
