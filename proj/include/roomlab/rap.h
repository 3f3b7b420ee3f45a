// include/roomlab/rap.h

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

#ifndef ROOMLAB_RAP_H_
#define ROOMLAB_RAP_H_

// Room acoustical parameters computed from an impulse response:
// reverberation (T60, EDT) from the Schroeder decay curve, energy ratios
// (C50, C80, D50, Ts) from direct sums over h^2, and the speech transmission
// index in its noiseless indirect form (octave-band MTF of h^2), with
// %ALcons mapped from STI.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roomlab/audio.h"
#include "roomlab/signal.h"

namespace roomlab {

inline constexpr std::size_t kNumOctaveBands = 7;
inline constexpr std::array<double, kNumOctaveBands> kOctaveBandCentersHz = {
    125, 250, 500, 1000, 2000, 4000, 8000};

/// The 14 one-third-octave modulation frequencies from 0.63 to 12.5 Hz.
std::vector<double> StandardModulationFrequencies();

/// A RAP computation that cannot produce a value for this input.
class AnalysisError : public Error {
 public:
  AnalysisError(std::string metric, const std::string& message)
      : Error(metric + ": " + message), metric_(std::move(metric)) {}
  const std::string& metric() const { return metric_; }

 private:
  std::string metric_;
};

struct RapSet {
  double sti = 0.0;     // [0, 1]
  double alcons = 0.0;  // %
  double t60 = 0.0;     // s
  double edt = 0.0;     // s
  double c80 = 0.0;     // dB
  double c50 = 0.0;     // dB
  double d50 = 0.0;     // %
  double ts = 0.0;      // s

  bool operator==(const RapSet&) const = default;
};

/// Names in RapSet field order, as used for JSON keys and report columns.
inline constexpr std::array<const char*, 8> kRapNames = {
    "sti", "alcons", "t60", "edt", "c80", "c50", "d50", "ts"};

std::array<double, 8> ToArray(const RapSet& r);

/// Result of AnalyzePartial: every metric that could be computed, and the
/// reason for each one that could not.
struct PartialRapSet {
  std::optional<double> sti, alcons, t60, edt, c80, c50, d50, ts;
  std::map<std::string, std::string> failures;
};

/// Octave-band weights for the STI sum. Must hold seven non-negative values
/// summing to one.
struct BandWeights {
  std::array<double, kNumOctaveBands> weights{};

  void Validate() const;
  static BandWeights FromJsonFile(const std::filesystem::path& path);
  static BandWeights FromJsonText(const std::string& text);
  /// The shipped data/sti_band_weights.json table (compiled in).
  static const BandWeights& Default();
};

/// Modulation transfer values, one row per octave band and one column per
/// modulation frequency.
struct MtfMatrix {
  std::vector<double> modulation_freqs;
  std::array<std::vector<double>, kNumOctaveBands> values;
  /// False where the band-filtered response carried no energy.
  std::array<bool, kNumOctaveBands> band_valid{};
};

struct AnalyzeOptions {
  BandWeights weights = BandWeights::Default();
  std::vector<double> modulation_freqs = StandardModulationFrequencies();
};

/// Least-squares line through a decay curve: values_db ~ intercept + slope*t.
struct DecayLine {
  double slope_db_per_s = 0.0;
  double intercept_db = 0.0;
};

/// Fits the contiguous run of the curve from its first value at or below
/// start_db up to (excluding) its first value below end_db. Throws
/// AnalysisError(metric, ...) when the curve does not cover the span with at
/// least two samples or does not decay.
DecayLine FitDecayLine(const DecayCurve& edc, double start_db, double end_db,
                       const std::string& metric);

/// T30 procedure: least-squares line over the -5..-35 dB span, extrapolated
/// to 60 dB.
double T60FromDecay(const DecayCurve& edc);

/// Least-squares line over 0..-10 dB, scaled to 60 dB.
double EdtFromDecay(const DecayCurve& edc);

/// 10 log10(early / late) with the split at early_ms.
double Clarity(const Rir& h, double early_ms);

/// Percentage of total energy arriving before 50 ms.
double Definition(const Rir& h);

/// First moment of h^2 in seconds.
double CenterTime(const Rir& h);

MtfMatrix Mtf(const Rir& h, const std::vector<double>& modulation_freqs =
                                StandardModulationFrequencies());

/// Noiseless STI: apparent SNR per cell clipped to +-15 dB, transmission
/// indices averaged per band, then weighted over bands.
double Sti(const MtfMatrix& mtf, const BandWeights& weights);

/// 170.5045 * exp(-5.419 * sti)
double AlconsFromSti(double sti);

/// All eight parameters. Throws AnalysisError naming the first metric that
/// fails.
RapSet Analyze(const Rir& h, const AnalyzeOptions& options = {});

PartialRapSet AnalyzePartial(const Rir& h, const AnalyzeOptions& options = {});

}  // namespace roomlab

#endif  // ROOMLAB_RAP_H_
