// src/synth.cc

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

#include "roomlab/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "roomlab/signal.h"

namespace roomlab {

namespace {

constexpr double kMinAcceptanceRate = 1e-3;

void RequireSameRate(const AudioClip& a, const AudioClip& b, const char* what) {
  if (a.sample_rate() != b.sample_rate()) {
    std::ostringstream os;
    os << what << ": sample-rate mismatch (" << a.sample_rate() << " Hz vs "
       << b.sample_rate() << " Hz)";
    throw Error(os.str());
  }
}

void ValidateSegments(std::span<const VadSegment> segments) {
  for (const VadSegment& s : segments) {
    if (!std::isfinite(s.start_s) || !std::isfinite(s.end_s) ||
        s.start_s < 0.0 || s.end_s < s.start_s) {
      std::ostringstream os;
      os << "malformed VAD segment [" << s.start_s << ", " << s.end_s << "]";
      throw Error(os.str());
    }
  }
}

// Sorted, non-overlapping union of the segments shifted by offset and
// clipped to [0, duration].
std::vector<VadSegment> VoicedUnion(std::span<const VadSegment> segments,
                                    double offset, double duration) {
  std::vector<VadSegment> shifted;
  for (const VadSegment& s : segments) {
    const double a = std::clamp(s.start_s + offset, 0.0, duration);
    const double b = std::clamp(s.end_s + offset, 0.0, duration);
    if (b > a) shifted.push_back({a, b});
  }
  std::sort(shifted.begin(), shifted.end(),
            [](const VadSegment& x, const VadSegment& y) {
              return x.start_s < y.start_s;
            });
  std::vector<VadSegment> merged;
  for (const VadSegment& s : shifted) {
    if (!merged.empty() && s.start_s <= merged.back().end_s) {
      merged.back().end_s = std::max(merged.back().end_s, s.end_s);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace

void OccupancyConfig::Validate() const {
  if (!(gamma_shape > 0.0) || !(gamma_scale_cm > 0.0))
    throw Error("OccupancyConfig: gamma parameters must be positive");
  if (!(d0 > 0.0) || !(d0 < d_max))
    throw Error("OccupancyConfig: require 0 < d0 < d_max");
  if (n_max < 1) throw Error("OccupancyConfig: n_max must be >= 1");
  if (volume_caps.empty()) throw Error("OccupancyConfig: empty volume cap table");
  for (std::size_t i = 0; i < volume_caps.size(); ++i) {
    const VolumeCap& c = volume_caps[i];
    if (c.max_occupancy < 1 || c.max_occupancy > n_max)
      throw Error("OccupancyConfig: caps must lie in [1, n_max]");
    if (i > 0 && (c.max_volume <= volume_caps[i - 1].max_volume ||
                  c.max_occupancy < volume_caps[i - 1].max_occupancy))
      throw Error("OccupancyConfig: caps must be monotone in volume");
  }
  if (!std::isinf(volume_caps.back().max_volume))
    throw Error("OccupancyConfig: the last cap must cover all volumes");
  if (snr_grid.empty()) throw Error("OccupancyConfig: empty SNR grid");
  if (!(frame_s > 0.0) || !(clip_s > 0.0))
    throw Error("OccupancyConfig: frame and clip lengths must be positive");
  if (!(cap_enforce_probability >= 0.0 && cap_enforce_probability <= 1.0))
    throw Error("OccupancyConfig: cap_enforce_probability must lie in [0, 1]");
  if (!(frame_activity > 0.0 && frame_activity <= 1.0))
    throw Error("OccupancyConfig: frame_activity must lie in (0, 1]");
  if (!(early_cutoff_ms >= 0.0))
    throw Error("OccupancyConfig: early_cutoff_ms must be >= 0");
}

int OccupancyConfig::CapFor(double volume) const {
  for (const VolumeCap& c : volume_caps) {
    if (volume < c.max_volume) return c.max_occupancy;
  }
  return volume_caps.back().max_occupancy;
}

std::vector<double> GeometricLevelPmf(int n_max, double ratio) {
  if (n_max < 1 || !(ratio > 0.0))
    throw Error("GeometricLevelPmf: need n_max >= 1 and ratio > 0");
  std::vector<double> pmf(n_max);
  double w = 1.0;
  for (double& p : pmf) {
    p = w;
    w *= ratio;
  }
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  for (double& p : pmf) p /= total;
  return pmf;
}

UnifiedExample SynthUnified(const AudioClip& speech, const Rir& rir,
                            const AudioClip& noise, double snr_db,
                            const AnalyzeOptions& options) {
  RequireSameRate(speech, rir.clip(), "SynthUnified");
  RequireSameRate(speech, noise, "SynthUnified");
  RapSet labels = Analyze(rir, options);
  AudioClip clip = MixAtSnr(Convolve(speech, rir), noise, snr_db);
  return UnifiedExample{std::move(clip), labels, rir.volume(),
                        rir.source_distance(), snr_db};
}

double DistanceAcceptanceRate(const OccupancyConfig& cfg) {
  const double lo = cfg.d0 * 100.0 / cfg.gamma_scale_cm;
  const double hi = cfg.d_max * 100.0 / cfg.gamma_scale_cm;
  return boost::math::gamma_p(cfg.gamma_shape, hi) -
         boost::math::gamma_p(cfg.gamma_shape, lo);
}

double SampleDistance(Rng& rng, const OccupancyConfig& cfg) {
  cfg.Validate();
  if (DistanceAcceptanceRate(cfg) < kMinAcceptanceRate) {
    throw Error("SampleDistance: truncation window (d0, d_max] admits under "
                "0.1% of the Gamma law");
  }
  std::gamma_distribution<double> gamma(cfg.gamma_shape, cfg.gamma_scale_cm);
  while (true) {
    const double d = gamma(rng) / 100.0;
    if (d > cfg.d0 && d <= cfg.d_max) return d;
  }
}

int SampleOccupancy(Rng& rng, double volume, const OccupancyConfig& cfg,
                    std::span<const double> level_pmf) {
  if (level_pmf.empty()) throw Error("SampleOccupancy: empty level pmf");
  if (level_pmf.size() > static_cast<std::size_t>(cfg.n_max))
    throw Error("SampleOccupancy: pmf has more levels than n_max");
  double total = 0.0;
  for (double p : level_pmf) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error("SampleOccupancy: pmf entries must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw Error("SampleOccupancy: pmf must sum to 1");

  std::bernoulli_distribution enforce(cfg.cap_enforce_probability);
  const bool capped = enforce(rng);
  const std::size_t cap = static_cast<std::size_t>(cfg.CapFor(volume));
  std::span<const double> support = level_pmf;
  if (capped && cap < level_pmf.size()) {
    auto below = level_pmf.first(cap);
    // A pmf with no mass under the cap cannot be restricted to it.
    if (std::accumulate(below.begin(), below.end(), 0.0) > 0.0) support = below;
  }
  std::discrete_distribution<int> draw(support.begin(), support.end());
  return draw(rng) + 1;
}

Rir StripEarly(const Rir& h, double cutoff_ms) {
  const std::size_t cut = static_cast<std::size_t>(
      std::ceil(cutoff_ms / 1000.0 * h.sample_rate() - 1e-9));
  if (h.size() <= cut)
    throw Error("StripEarly: impulse response shorter than the cutoff");
  std::vector<double> s(h.samples().begin(), h.samples().end());
  std::fill(s.begin(), s.begin() + cut, 0.0);
  if (Energy(std::span<const double>(s).subspan(cut)) == 0.0)
    throw Error("StripEarly: all energy lies before the cutoff");
  AudioClip normalized = PeakNormalize(AudioClip(std::move(s), h.sample_rate()));
  return Rir(std::move(normalized), h.volume(), h.source_distance());
}

std::vector<double> MixTalkers(std::span<const Talker> talkers,
                               std::span<const Placement> placements,
                               std::size_t length, double d0) {
  if (talkers.size() != placements.size())
    throw Error("MixTalkers: one placement per talker required");
  std::vector<double> mix(length, 0.0);
  for (std::size_t i = 0; i < talkers.size(); ++i) {
    const Placement& p = placements[i];
    if (!(p.distance_m > 0.0))
      throw Error("MixTalkers: talker distance must be positive");
    const AudioClip x = PeakNormalize(talkers[i].speech);
    const double gain = d0 / p.distance_m;
    for (std::size_t n = 0; n < x.size() && p.offset + n < length; ++n)
      mix[p.offset + n] += gain * x[n];
  }
  return mix;
}

std::vector<int> LabelTimeline(
    std::span<const std::vector<VadSegment>> vad_per_talker,
    std::span<const double> offsets_s, double duration_s, double frame_s,
    double activity) {
  if (vad_per_talker.size() != offsets_s.size())
    throw Error("LabelTimeline: one offset per talker required");
  if (!(duration_s > 0.0) || !(frame_s > 0.0))
    throw Error("LabelTimeline: duration and frame must be positive");
  const auto frames =
      static_cast<std::size_t>(std::ceil(duration_s / frame_s - 1e-9));
  std::vector<int> timeline(frames, 0);
  for (std::size_t i = 0; i < vad_per_talker.size(); ++i) {
    ValidateSegments(vad_per_talker[i]);
    const auto voiced = VoicedUnion(vad_per_talker[i], offsets_s[i], duration_s);
    for (std::size_t f = 0; f < frames; ++f) {
      const double a = f * frame_s;
      const double b = std::min((f + 1) * frame_s, duration_s);
      double covered = 0.0;
      for (const VadSegment& s : voiced) {
        covered += std::max(0.0, std::min(b, s.end_s) - std::max(a, s.start_s));
      }
      // Small slack so that exactly half a frame counts.
      if (covered >= activity * (b - a) - 1e-9) ++timeline[f];
    }
  }
  return timeline;
}

OccupancyExample SynthOccupancy(std::span<const Talker> talkers, const Rir& rir,
                                const AudioClip& noise, double snr_db,
                                const OccupancyConfig& cfg, Rng& rng) {
  cfg.Validate();
  const int fs = rir.sample_rate();
  RequireSameRate(rir.clip(), noise, "SynthOccupancy");
  if (talkers.size() > static_cast<std::size_t>(cfg.n_max))
    throw Error("SynthOccupancy: more talkers than n_max");
  for (const Talker& t : talkers) {
    RequireSameRate(rir.clip(), t.speech, "SynthOccupancy");
    ValidateSegments(t.vad);
    for (const VadSegment& s : t.vad) {
      if (s.end_s > t.speech.duration() + 1.0 / fs)
        throw Error("SynthOccupancy: VAD segment beyond the end of its clip");
    }
  }
  const auto length =
      static_cast<std::size_t>(std::llround(cfg.clip_s * fs));

  OccupancyExample out{AudioClip({0.0}, fs), {}, {}, {}, snr_db};
  std::vector<Placement> placements;
  for (const Talker& t : talkers) {
    const double d = SampleDistance(rng, cfg);
    const std::size_t room = length > t.speech.size() ? length - t.speech.size() : 0;
    std::uniform_int_distribution<std::size_t> start(0, room);
    const std::size_t offset = start(rng);
    placements.push_back({d, offset});
    out.distances_m.push_back(d);
    out.offsets_s.push_back(static_cast<double>(offset) / fs);
  }

  std::vector<std::vector<VadSegment>> vad;
  for (const Talker& t : talkers) vad.push_back(t.vad);
  out.timeline = LabelTimeline(vad, out.offsets_s,
                               static_cast<double>(length) / fs, cfg.frame_s,
                               cfg.frame_activity);

  if (talkers.empty()) {
    out.clip = AudioClip(TileToLength(noise.samples(), length), fs);
    return out;
  }
  const std::vector<double> dry = MixTalkers(talkers, placements, length, cfg.d0);
  const Rir late = StripEarly(rir, cfg.early_cutoff_ms);
  std::vector<double> wet = Convolve(dry, late.samples());
  wet.resize(length);
  out.clip = MixAtSnr(AudioClip(std::move(wet), fs), noise, snr_db);
  return out;
}

}  // namespace roomlab
