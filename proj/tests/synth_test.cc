// tests/synth_test.cc

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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "roomlab/signal.h"
#include "roomlab/ssir.h"
#include "roomlab/synth.h"

namespace roomlab {
namespace {

constexpr int kFs = kPipelineSampleRate;

AudioClip Noise(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return AudioClip(std::move(x), kFs);
}

double SnrDb(std::span<const double> signal, std::span<const double> mixed) {
  std::vector<double> noise(mixed.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) noise[i] = mixed[i] - signal[i];
  return 10.0 * std::log10(MeanPower(signal) / MeanPower(noise));
}

Rir RoomRir(std::uint64_t seed = 1) {
  SsirParams p;
  p.t_i = 0.02;
  p.t_d = 0.4;
  p.total_t = 0.6;
  p.volume = 250;
  return GenerateSsir(p, seed);
}

TEST(UnifiedTest, LabelsEqualStandaloneAnalysis) {
  const Rir h = RoomRir();
  const auto ex = SynthUnified(Noise(8000, 1), h, Noise(3000, 2), 10.0);
  EXPECT_EQ(ex.labels, Analyze(h));
  EXPECT_EQ(ex.volume, 250.0);
  EXPECT_FALSE(ex.source_distance.has_value());
  EXPECT_EQ(ex.clip.size(), 8000u + h.size() - 1);
}

TEST(UnifiedTest, MeasuredSnrOnGrid) {
  const Rir h = RoomRir();
  const AudioClip s = Noise(16000, 3);
  const AudioClip reverberant = Convolve(s, h);
  for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    const auto ex = SynthUnified(s, h, Noise(7000, 4), snr);
    EXPECT_NEAR(SnrDb(reverberant.samples(), ex.clip.samples()), snr, 0.01);
  }
  EXPECT_EQ(SynthUnified(s, h, Noise(7000, 4), kInfiniteSnr).clip, reverberant);
}

TEST(UnifiedTest, DeltaPathIsIdentity) {
  // A lone impulse has no decay to analyze, so the audio path is checked
  // on its own.
  const AudioClip s = Noise(1000, 5);
  const Rir delta(AudioClip({1.0}, kFs));
  EXPECT_EQ(MixAtSnr(Convolve(s, delta), Noise(10, 6), kInfiniteSnr), s);
}

TEST(UnifiedTest, RateMismatchRejected) {
  AudioClip s8k({0.1, 0.2, 0.3}, 8000);
  EXPECT_THROW(SynthUnified(s8k, RoomRir(), Noise(10, 1), 5.0), Error);
}

TEST(DistanceTest, SupportAndMean) {
  const OccupancyConfig cfg;
  Rng rng = MakeRng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double d = SampleDistance(rng, cfg);
    ASSERT_GT(d, 1.0);
    ASSERT_LE(d, 6.0);
    sum += d;
  }
  EXPECT_GE(sum / n, 1.0);
  EXPECT_LE(sum / n, 2.2);
}

TEST(DistanceTest, ChiSquareAgainstTruncatedGamma) {
  const OccupancyConfig cfg;
  const int n = 100000;
  auto cdf = [&](double meters) {
    return boost::math::gamma_p(cfg.gamma_shape, meters * 100.0 / cfg.gamma_scale_cm);
  };
  const double z = cdf(cfg.d_max) - cdf(cfg.d0);
  EXPECT_NEAR(DistanceAcceptanceRate(cfg), z, 1e-15);

  // Bins of 5 cm over (1, 6], merged from the right until each expects >= 5.
  std::vector<double> edges;
  for (int i = 0; i <= 100; ++i) edges.push_back(1.0 + 0.05 * i);
  std::vector<double> expected, merged_edges = {edges[0]};
  double pending = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    pending += n * (cdf(edges[i]) - cdf(edges[i - 1])) / z;
    if (pending >= 5.0 || i + 1 == edges.size()) {
      expected.push_back(pending);
      merged_edges.push_back(edges[i]);
      pending = 0.0;
    }
  }
  if (expected.back() < 5.0 && expected.size() > 1) {
    expected[expected.size() - 2] += expected.back();
    expected.pop_back();
    merged_edges.erase(merged_edges.end() - 2);
  }
  std::vector<double> observed(expected.size(), 0.0);
  Rng rng = MakeRng(2);
  for (int i = 0; i < n; ++i) {
    const double d = SampleDistance(rng, cfg);
    const auto bin = std::upper_bound(merged_edges.begin() + 1, merged_edges.end() - 1, d) -
                     (merged_edges.begin() + 1);
    // Bins are (lo, hi]: a value on an edge belongs to the lower bin.
    std::size_t b = static_cast<std::size_t>(bin);
    if (b > 0 && d == merged_edges[b]) --b;
    observed[b] += 1.0;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  const boost::math::chi_squared chi2(static_cast<double>(expected.size() - 1));
  const double p = boost::math::cdf(boost::math::complement(chi2, stat));
  EXPECT_GT(p, 0.05) << "chi2 " << stat << " over " << expected.size() << " bins";
}

TEST(DistanceTest, NarrowWindowRejected) {
  OccupancyConfig cfg;
  cfg.d0 = 20.0;
  cfg.d_max = 30.0;
  EXPECT_LT(DistanceAcceptanceRate(cfg), 1e-3);
  Rng rng = MakeRng(1);
  EXPECT_THROW(SampleDistance(rng, cfg), Error);
  cfg.d0 = 7.0;
  cfg.d_max = 6.0;
  EXPECT_THROW(SampleDistance(rng, cfg), Error);
}

TEST(OccupancyTest, CapTable) {
  const OccupancyConfig cfg;
  EXPECT_EQ(cfg.CapFor(300), 7);
  EXPECT_EQ(cfg.CapFor(400), 12);
  EXPECT_EQ(cfg.CapFor(1999), 12);
  EXPECT_EQ(cfg.CapFor(3000), 14);
  EXPECT_EQ(cfg.CapFor(5000), 16);
  EXPECT_EQ(cfg.CapFor(6000), 17);
  EXPECT_EQ(cfg.CapFor(1e6), 17);
  EXPECT_NO_THROW(cfg.Validate());
  OccupancyConfig bad = cfg;
  bad.volume_caps[1].max_occupancy = 5;
  EXPECT_THROW(bad.Validate(), Error);
  bad = cfg;
  bad.volume_caps.back().max_occupancy = 18;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(OccupancyTest, PointMassBelowCap) {
  const OccupancyConfig cfg;
  std::vector<double> pmf(17, 0.0);
  pmf[4] = 1.0;
  Rng rng = MakeRng(3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(SampleOccupancy(rng, 300, cfg, pmf), 5);
}

TEST(OccupancyTest, SoftCapRarelyExceeded) {
  const OccupancyConfig cfg;
  const std::vector<double> uniform(17, 1.0 / 17);
  Rng rng = MakeRng(4);
  int above = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const int level = SampleOccupancy(rng, 300, cfg, uniform);
    ASSERT_GE(level, 1);
    ASSERT_LE(level, 17);
    above += level > 7;
  }
  const double frac = static_cast<double>(above) / n;
  EXPECT_GT(frac, 0.0);
  EXPECT_LT(frac, 0.12);
}

TEST(OccupancyTest, BadPmfRejected) {
  const OccupancyConfig cfg;
  Rng rng = MakeRng(5);
  EXPECT_THROW(SampleOccupancy(rng, 300, cfg, std::vector<double>{}), Error);
  EXPECT_THROW(SampleOccupancy(rng, 300, cfg, std::vector<double>{0.5, 0.4}), Error);
  EXPECT_THROW(SampleOccupancy(rng, 300, cfg, std::vector<double>(18, 1.0 / 18)), Error);
  EXPECT_THROW(SampleOccupancy(rng, 300, cfg, std::vector<double>{1.5, -0.5}), Error);
}

TEST(OccupancyTest, GeometricPmf) {
  const auto pmf = GeometricLevelPmf(17);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
  for (std::size_t i = 1; i < pmf.size(); ++i) EXPECT_NEAR(pmf[i] / pmf[i - 1], 0.8, 1e-12);
}

TEST(StripEarlyTest, RemovesDirectSoundKeepsTail) {
  std::vector<double> h(8000, 0.0);
  h[160] = 1.0;  // direct sound at 10 ms
  for (std::size_t n = 1600; n < h.size(); ++n)
    h[n] = 0.2 * std::exp(-double(n) / 2000.0) * ((n % 3) - 1.0);
  const Rir s = StripEarly(Rir(AudioClip(h, kFs), 100.0, 2.0));
  EXPECT_EQ(s.samples()[160], 0.0);
  double peak = 0.0;
  for (double v : s.samples()) peak = std::max(peak, std::abs(v));
  EXPECT_EQ(peak, 1.0);
  EXPECT_EQ(Definition(s), 0.0);
  EXPECT_EQ(s.volume(), 100.0);
  EXPECT_EQ(s.source_distance(), 2.0);
  // Tail shape retained up to scale.
  const double k = s.samples()[1602] / h[1602];
  for (std::size_t n = 1600; n < h.size(); ++n) EXPECT_NEAR(s.samples()[n], k * h[n], 1e-12);
}

TEST(StripEarlyTest, Errors) {
  std::vector<double> h(8000, 0.0);
  h[10] = 1.0;
  EXPECT_THROW(StripEarly(Rir(AudioClip(h, kFs))), Error);
  EXPECT_THROW(StripEarly(Rir(AudioClip({1.0, 0.5}, kFs))), Error);
}

TEST(TimelineTest, OneSpeakerThroughout) {
  const std::vector<std::vector<VadSegment>> vad = {{{0.0, 10.0}}};
  const std::vector<double> off = {0.0};
  EXPECT_EQ(LabelTimeline(vad, off, 10.0, 1.0), std::vector<int>(10, 1));
}

TEST(TimelineTest, DisjointHalvesNeverTwo) {
  const std::vector<std::vector<VadSegment>> vad = {{{0.0, 5.0}}, {{0.0, 5.0}}};
  const std::vector<double> off = {0.0, 5.0};
  EXPECT_EQ(LabelTimeline(vad, off, 10.0, 1.0), std::vector<int>(10, 1));
}

TEST(TimelineTest, ActivityThreshold) {
  const std::vector<double> off = {0.0};
  const std::vector<std::vector<VadSegment>> short_vad = {{{2.1, 2.4}}};
  EXPECT_EQ(LabelTimeline(short_vad, off, 4.0, 1.0), (std::vector<int>{0, 0, 0, 0}));
  const std::vector<std::vector<VadSegment>> half = {{{2.0, 2.5}}};
  EXPECT_EQ(LabelTimeline(half, off, 4.0, 1.0), (std::vector<int>{0, 0, 1, 0}));
  // Split segments in one frame add up.
  const std::vector<std::vector<VadSegment>> split = {{{1.0, 1.3}, {1.6, 1.9}}};
  EXPECT_EQ(LabelTimeline(split, off, 4.0, 1.0), (std::vector<int>{0, 1, 0, 0}));
}

TEST(TimelineTest, LengthAndPartialFrame) {
  const std::vector<std::vector<VadSegment>> vad = {{{10.0, 10.5}}};
  const std::vector<double> off = {0.0};
  const auto t = LabelTimeline(vad, off, 10.5, 1.0);
  ASSERT_EQ(t.size(), 11u);
  EXPECT_EQ(t.back(), 1);
  const std::vector<std::vector<VadSegment>> none;
  EXPECT_EQ(LabelTimeline(none, std::vector<double>{}, 3.0, 1.0), std::vector<int>(3, 0));
}

TEST(TimelineTest, MalformedRejected) {
  const std::vector<double> off = {0.0};
  const std::vector<std::vector<VadSegment>> backwards = {{{2.0, 1.0}}};
  EXPECT_THROW(LabelTimeline(backwards, off, 4.0, 1.0), Error);
  const std::vector<std::vector<VadSegment>> negative = {{{-1.0, 1.0}}};
  EXPECT_THROW(LabelTimeline(negative, off, 4.0, 1.0), Error);
  const std::vector<std::vector<VadSegment>> ok = {{{0.0, 1.0}}};
  EXPECT_THROW(LabelTimeline(ok, std::vector<double>{}, 4.0, 1.0), Error);
}

TEST(MixTalkersTest, InverseDistanceGain) {
  const std::vector<Talker> one = {{AudioClip({0.5, -0.25}, kFs), {}}};
  const std::vector<Placement> near = {{1.0, 0}}, far = {{2.0, 0}};
  const auto a = MixTalkers(one, near, 2, 1.0);
  const auto b = MixTalkers(one, far, 2, 1.0);
  EXPECT_EQ(a, (std::vector<double>{1.0, -0.5}));
  EXPECT_EQ(b, (std::vector<double>{0.5, -0.25}));
}

TEST(MixTalkersTest, EnergyAdditiveForDisjointSupport) {
  std::vector<Talker> talkers;
  std::vector<Placement> place;
  double expected = 0.0;
  const double d0 = 1.0;
  for (int i = 0; i < 4; ++i) {
    const AudioClip x = Noise(4000, 10 + i, 0.3);
    const double d = 1.5 + i;
    talkers.push_back({x, {}});
    place.push_back({d, static_cast<std::size_t>(i) * 20000});
    expected += (d0 / d) * (d0 / d) * Energy(PeakNormalize(x).samples());
  }
  const auto dry = MixTalkers(talkers, place, 80000, d0);
  EXPECT_NEAR(Energy(dry), expected, 0.01 * expected);
  // Reverberated pieces stay disjoint when gaps exceed the response.
  const Rir late = StripEarly(RoomRir());
  const auto wet = Convolve(dry, late.samples());
  double parts = 0.0;
  for (std::size_t i = 0; i < talkers.size(); ++i) {
    const auto single = MixTalkers(std::span(talkers).subspan(i, 1),
                                   std::span(place).subspan(i, 1), 80000, d0);
    parts += Energy(Convolve(single, late.samples()));
  }
  EXPECT_NEAR(Energy(wet), parts, 0.01 * parts);
}

std::vector<Talker> MakeTalkers(int n) {
  std::vector<Talker> t;
  for (int i = 0; i < n; ++i) t.push_back({Noise(32000, 100 + i, 0.1), {{0.2, 1.8}}});
  return t;
}

TEST(SynthOccupancyTest, NoTalkersGivesNoiseAndZeros) {
  const OccupancyConfig cfg;
  Rng rng = MakeRng(1);
  const AudioClip noise = Noise(30000, 7);
  const auto ex = SynthOccupancy({}, RoomRir(), noise, 30.0, cfg, rng);
  EXPECT_EQ(ex.timeline, std::vector<int>(10, 0));
  ASSERT_EQ(ex.clip.size(), 160000u);
  EXPECT_EQ(ex.clip[30000], noise[0]);
  EXPECT_TRUE(ex.distances_m.empty());
}

TEST(SynthOccupancyTest, SnrOnGridAndTimelineBounded) {
  const OccupancyConfig cfg;
  const Rir h = RoomRir();
  const auto talkers = MakeTalkers(5);
  for (double snr : cfg.snr_grid) {
    Rng rng = MakeRng(9, static_cast<std::uint64_t>(snr));
    Rng same = MakeRng(9, static_cast<std::uint64_t>(snr));
    const auto ex = SynthOccupancy(talkers, h, Noise(20000, 8), snr, cfg, rng);
    const auto dry = SynthOccupancy(talkers, h, Noise(20000, 8), kInfiniteSnr, cfg, same);
    EXPECT_EQ(ex.distances_m, dry.distances_m);
    EXPECT_NEAR(SnrDb(dry.clip.samples(), ex.clip.samples()), snr, 0.01);
    ASSERT_EQ(ex.timeline.size(), 10u);
    for (int v : ex.timeline) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 5);
    }
    for (std::size_t i = 0; i < ex.offsets_s.size(); ++i) {
      EXPECT_GE(ex.offsets_s[i], 0.0);
      EXPECT_LE(ex.offsets_s[i], 8.0);
      EXPECT_GT(ex.distances_m[i], 1.0);
    }
  }
}

TEST(SynthOccupancyTest, DeterministicInRng) {
  const OccupancyConfig cfg;
  const auto talkers = MakeTalkers(3);
  Rng a = MakeRng(42), b = MakeRng(42);
  const auto x = SynthOccupancy(talkers, RoomRir(), Noise(5000, 1), 35, cfg, a);
  const auto y = SynthOccupancy(talkers, RoomRir(), Noise(5000, 1), 35, cfg, b);
  EXPECT_EQ(x.clip, y.clip);
  EXPECT_EQ(x.timeline, y.timeline);
}

TEST(SynthOccupancyTest, Errors) {
  OccupancyConfig cfg;
  Rng rng = MakeRng(1);
  EXPECT_THROW(SynthOccupancy(MakeTalkers(18), RoomRir(), Noise(100, 1), 30, cfg, rng),
               Error);
  std::vector<Talker> bad = {{Noise(16000, 1), {{0.0, 5.0}}}};
  EXPECT_THROW(SynthOccupancy(bad, RoomRir(), Noise(100, 1), 30, cfg, rng), Error);
}

}  // namespace
}  // namespace roomlab
