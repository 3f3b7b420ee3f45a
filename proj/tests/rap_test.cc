// tests/rap_test.cc

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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "roomlab/rap.h"
#include "roomlab/ssir.h"
#include "test_util.h"

namespace roomlab {
namespace {

using testing::ExponentialRir;

Rir Delta(std::size_t length, std::size_t at = 0) {
  std::vector<double> h(length, 0.0);
  h[at] = 1.0;
  return Rir(AudioClip(std::move(h), kPipelineSampleRate));
}

MtfMatrix ConstantMtf(double m) {
  MtfMatrix mtf;
  mtf.modulation_freqs = StandardModulationFrequencies();
  for (std::size_t k = 0; k < kNumOctaveBands; ++k) {
    mtf.values[k].assign(mtf.modulation_freqs.size(), m);
    mtf.band_valid[k] = true;
  }
  return mtf;
}

TEST(ModulationFrequenciesTest, ThirdOctaveGrid) {
  const auto f = StandardModulationFrequencies();
  ASSERT_EQ(f.size(), 14u);
  EXPECT_DOUBLE_EQ(f.front(), 0.63);
  EXPECT_DOUBLE_EQ(f.back(), 12.5);
}

TEST(BandWeightsTest, DefaultTableIsValid) {
  const auto& w = BandWeights::Default();
  double sum = 0.0;
  for (double v : w.weights) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(w.weights[0], 0.129);
  EXPECT_DOUBLE_EQ(w.weights[4], 0.186);
}

TEST(BandWeightsTest, RejectsMalformed) {
  EXPECT_THROW(BandWeights::FromJsonText("{"), Error);
  EXPECT_THROW(BandWeights::FromJsonText(R"({"weights": [1, 2]})"), Error);
  EXPECT_THROW(
      BandWeights::FromJsonText(R"({"weights": [0.5,0.5,0.5,0,0,0,0]})"),
      Error);
  EXPECT_THROW(
      BandWeights::FromJsonText(R"({"weights": [1.5,-0.5,0,0,0,0,0]})"),
      Error);
  const auto w = BandWeights::FromJsonText(
      R"({"weights": [0.2,0.2,0.2,0.1,0.1,0.1,0.1]})");
  EXPECT_DOUBLE_EQ(w.weights[0], 0.2);
}

TEST(AlconsTest, KnownValues) {
  EXPECT_DOUBLE_EQ(AlconsFromSti(0.0), 170.5045);
  EXPECT_NEAR(AlconsFromSti(0.5), 11.35, 0.005);
  EXPECT_NEAR(AlconsFromSti(1.0), 0.756, 0.0005);
  for (int i = 0; i < 100; ++i) {
    const double s = i / 99.0;
    EXPECT_NEAR(AlconsFromSti(s), 170.5045 * std::exp(-5.419 * s), 1e-9);
  }
  EXPECT_THROW(AlconsFromSti(-0.01), Error);
  EXPECT_THROW(AlconsFromSti(1.01), Error);
  EXPECT_THROW(AlconsFromSti(NAN), Error);
}

TEST(StiTest, ConstantMtfValues) {
  const auto& w = BandWeights::Default();
  EXPECT_NEAR(Sti(ConstantMtf(0.5), w), 0.5, 1e-12);
  EXPECT_EQ(Sti(ConstantMtf(1.0), w), 1.0);
  EXPECT_EQ(Sti(ConstantMtf(0.0), w), 0.0);
  // Apparent SNR clipped at +-15 dB.
  EXPECT_EQ(Sti(ConstantMtf(0.999), w), 1.0);
  EXPECT_EQ(Sti(ConstantMtf(0.001), w), 0.0);
}

TEST(StiTest, DeltaIsExactlyOne) {
  const Rir d = Delta(8000);
  EXPECT_EQ(Sti(Mtf(d), BandWeights::Default()), 1.0);
  // A band-pass filter spreads even an ideal impulse over a few ms, so the
  // measured MTF sits a little under 1 but well above the +15 dB clip point.
  for (const auto& row : Mtf(d).values)
    for (double m : row) EXPECT_GT(m, 0.9693);
}

TEST(StiTest, InvalidBandRejected) {
  MtfMatrix m = ConstantMtf(0.5);
  m.band_valid[3] = false;
  EXPECT_THROW(Sti(m, BandWeights::Default()), AnalysisError);
}

TEST(MtfTest, MatchesClosedForm) {
  for (double t60 : {0.3, 1.0, 2.4}) {
    const MtfMatrix m = Mtf(testing::MultitoneRir(t60, 3 * t60 + 0.5));
    for (std::size_t k = 0; k < kNumOctaveBands; ++k)
      for (std::size_t f = 0; f < m.modulation_freqs.size(); ++f)
        EXPECT_NEAR(m.values[k][f],
                    testing::ClosedFormMtf(m.modulation_freqs[f], t60), 0.02)
            << "T60 " << t60 << " band " << k << " F " << m.modulation_freqs[f];
  }
}

TEST(MtfTest, StiDecreasesWithReverberation) {
  double prev = 2.0;
  for (double t60 : {0.3, 0.6, 1.2, 2.4}) {
    const double sti =
        Sti(Mtf(testing::MultitoneRir(t60, 3 * t60 + 0.5)), BandWeights::Default());
    EXPECT_LT(sti, prev) << t60;
    prev = sti;
  }
}

TEST(DecayTest, ExponentialT60AndEdt) {
  for (double t60 : {0.3, 0.5, 1.0, 2.0}) {
    const RapSet r = Analyze(ExponentialRir(t60, 3 * t60 + 0.5));
    EXPECT_NEAR(r.t60, t60, 0.02 * t60);
    EXPECT_NEAR(r.edt, t60, 0.02 * t60);
  }
}

TEST(DecayTest, NoDecayRangeRejected) {
  // The curve jumps from 0 dB straight to the floor.
  const Rir h = Delta(4000);
  EXPECT_THROW(T60FromDecay(SchroederDecay(h)), AnalysisError);
  EXPECT_THROW(EdtFromDecay(SchroederDecay(h)), AnalysisError);
  try {
    Analyze(h);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.metric(), "t60");
  }
}

TEST(EnergyRatioTest, MatchesClosedForm) {
  for (double t60 : {0.3, 0.5, 1.0, 2.0}) {
    const Rir h = ExponentialRir(t60, 3 * t60 + 0.5);
    const auto ref = testing::ExponentialClosedForm(t60, kPipelineSampleRate);
    EXPECT_NEAR(Clarity(h, 50), ref.c50, 1e-6);
    EXPECT_NEAR(Clarity(h, 80), ref.c80, 1e-6);
    EXPECT_NEAR(Definition(h), ref.d50, 1e-6);
    EXPECT_NEAR(CenterTime(h), ref.ts, 1e-9);
    EXPECT_NEAR(CenterTime(h), t60 / 13.8, 1e-3);
  }
  const Rir h = ExponentialRir(1.0, 3.5);
  EXPECT_NEAR(Clarity(h, 50), -0.027, 0.001);
  EXPECT_NEAR(Clarity(h, 80), 3.046, 0.001);
  EXPECT_NEAR(Definition(h), 49.84, 0.01);
}

TEST(EnergyRatioTest, DefinitionClarityIdentity) {
  const Rir h = GenerateSchroeder(1.0, 0.7, 1.5, 42);
  const double d = Definition(h) / 100.0;
  EXPECT_NEAR(Clarity(h, 50), 10.0 * std::log10(d / (1.0 - d)), 1e-6);
}

TEST(EnergyRatioTest, CenterTimeTranslates) {
  const Rir h = GenerateSchroeder(1.0, 0.5, 1.0, 3);
  std::vector<double> shifted(160, 0.0);
  shifted.insert(shifted.end(), h.samples().begin(), h.samples().end());
  const Rir g(AudioClip(std::move(shifted), kPipelineSampleRate));
  EXPECT_NEAR(CenterTime(g), CenterTime(h) + 0.010, 1e-12);
}

TEST(EnergyRatioTest, ScaleInvariant) {
  const Rir h = GenerateSchroeder(1.0, 0.5, 1.0, 3);
  const Rir g = GenerateSchroeder(7.0, 0.5, 1.0, 3);
  const RapSet a = Analyze(h), b = Analyze(g);
  EXPECT_NEAR(a.c50, b.c50, 1e-9);
  EXPECT_NEAR(a.t60, b.t60, 1e-9);
  EXPECT_NEAR(a.sti, b.sti, 1e-9);
  EXPECT_NEAR(a.ts, b.ts, 1e-12);
}

TEST(EnergyRatioTest, DegenerateClarity) {
  EXPECT_THROW(Clarity(Delta(400), 50), AnalysisError);        // too short
  EXPECT_THROW(Clarity(Delta(4000), 50), AnalysisError);       // no late energy
  EXPECT_THROW(Clarity(Delta(4000, 2000), 50), AnalysisError); // no early
  EXPECT_EQ(Definition(Delta(4000, 2000)), 0.0);
  EXPECT_EQ(Definition(Delta(4000)), 100.0);
}

TEST(AnalyzeTest, PartialReportsFailuresPerMetric) {
  const PartialRapSet p = AnalyzePartial(Delta(4000));
  ASSERT_TRUE(p.sti.has_value());
  EXPECT_EQ(*p.sti, 1.0);
  EXPECT_TRUE(p.d50.has_value());
  EXPECT_TRUE(p.ts.has_value());
  EXPECT_FALSE(p.c50.has_value());
  EXPECT_EQ(p.failures.count("c50"), 1u);
  EXPECT_EQ(p.failures.count("sti"), 0u);
  EXPECT_THROW(Analyze(Delta(4000)), AnalysisError);
}

TEST(AnalyzeTest, AlconsInvariantHolds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RapSet r = Analyze(GenerateSchroeder(1.0, 0.4 + 0.3 * seed, 3.0, seed));
    EXPECT_EQ(r.alcons, AlconsFromSti(r.sti));
    EXPECT_GE(r.sti, 0.0);
    EXPECT_LE(r.sti, 1.0);
  }
}

}  // namespace
}  // namespace roomlab
