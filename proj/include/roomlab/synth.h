// include/roomlab/synth.h

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

#ifndef ROOMLAB_SYNTH_H_
#define ROOMLAB_SYNTH_H_

// Training-corpus synthesis.
//
// Unified corpus: y = s * h + g n, with g set by the target SNR and labels
// taken from the RIR.
//
// Occupancy corpus: N talkers, each peak-normalized and attenuated by d0/d_i,
// placed at independent offsets, summed, convolved with the RIR after its
// first 50 ms are removed and the rest peak-normalized, then mixed with noise.
// Each 1 s frame is labeled with the number of talkers active in it.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "roomlab/audio.h"
#include "roomlab/rap.h"
#include "roomlab/random.h"

namespace roomlab {

/// Rooms with volume below max_volume (m^3) admit at most max_occupancy
/// talkers. Entries are ordered by max_volume.
struct VolumeCap {
  double max_volume;
  int max_occupancy;
};

struct OccupancyConfig {
  double gamma_shape = 6.18;
  double gamma_scale_cm = 18.66;  // Gamma samples are in centimeters
  double d0 = 1.0;                // m
  double d_max = 6.0;             // m
  int n_max = 17;
  std::vector<VolumeCap> volume_caps = {
      {400.0, 7},
      {2000.0, 12},
      {4000.0, 14},
      {6000.0, 16},
      {std::numeric_limits<double>::infinity(), 17}};
  std::vector<double> snr_grid = {25, 30, 35, 40, 45, 50};
  double frame_s = 1.0;
  double clip_s = 10.0;
  /// Probability that the volume cap is enforced for a given draw.
  double cap_enforce_probability = 0.9;
  /// Fraction of a frame a talker must be voiced in to be counted.
  double frame_activity = 0.5;
  double early_cutoff_ms = 50.0;

  void Validate() const;
  int CapFor(double volume) const;
};

/// P(N = n) proportional to ratio^(n-1) over n = 1..n_max.
std::vector<double> GeometricLevelPmf(int n_max, double ratio = 0.8);

struct UnifiedExample {
  AudioClip clip;
  RapSet labels;
  std::optional<double> volume;
  std::optional<double> source_distance;
  double snr_db;
};

UnifiedExample SynthUnified(const AudioClip& speech, const Rir& rir,
                            const AudioClip& noise, double snr_db,
                            const AnalyzeOptions& options = {});

/// Probability that one Gamma draw lands in (d0, d_max].
double DistanceAcceptanceRate(const OccupancyConfig& cfg);

/// Talker distance in meters, rejection-sampled from the truncated Gamma law.
double SampleDistance(Rng& rng, const OccupancyConfig& cfg);

/// Occupancy level in 1..n_max. level_pmf[n-1] = P(N = n). With probability
/// cap_enforce_probability the draw is restricted to levels within the room's
/// cap; otherwise the pmf is used as is.
int SampleOccupancy(Rng& rng, double volume, const OccupancyConfig& cfg,
                    std::span<const double> level_pmf);

/// Zeroes the first cutoff_ms and peak-normalizes the remainder.
Rir StripEarly(const Rir& h, double cutoff_ms = 50.0);

struct VadSegment {
  double start_s;
  double end_s;
};

struct Talker {
  AudioClip speech;
  std::vector<VadSegment> vad;
};

struct Placement {
  double distance_m;
  std::size_t offset;  // samples
};

/// Dry mixture of `length` samples: sum_i (d0 / d_i) * peak_normalize(x_i)
/// delayed by offset_i (truncated at the end).
std::vector<double> MixTalkers(std::span<const Talker> talkers,
                               std::span<const Placement> placements,
                               std::size_t length, double d0);

/// Per-frame count of talkers voiced for at least `activity` of the frame.
/// Segments are relative to each talker's clip and shifted by its offset.
std::vector<int> LabelTimeline(
    std::span<const std::vector<VadSegment>> vad_per_talker,
    std::span<const double> offsets_s, double duration_s, double frame_s,
    double activity = 0.5);

struct OccupancyExample {
  AudioClip clip;
  std::vector<int> timeline;
  std::vector<double> distances_m;
  std::vector<double> offsets_s;
  double snr_db;
};

/// With no talkers the clip is the tiled noise at unit gain (there is no
/// signal to set an SNR against) and the timeline is all zeros.
OccupancyExample SynthOccupancy(std::span<const Talker> talkers, const Rir& rir,
                                const AudioClip& noise, double snr_db,
                                const OccupancyConfig& cfg, Rng& rng);

}  // namespace roomlab

#endif  // ROOMLAB_SYNTH_H_
