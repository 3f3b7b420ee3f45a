// include/roomlab/ssir.h

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

#ifndef ROOMLAB_SSIR_H_
#define ROOMLAB_SSIR_H_

// Stochastic RIR models.
//
//   Schroeder:  h(t) = a exp(-6.9 t / T60) c(t),  c ~ N(0, 1)
//   Extended:   exponential rise over [0, T_h), exponential decay after,
//               Gaussian carrier throughout.
//   SSIR:       exponential rise over [0, T_i) carrying a sparse spike train
//               (K ~ Poisson(lambda V) events at uniform times, random sign),
//               exponential decay over [T_i, T] carrying Gaussian noise.
//
// Two-segment envelopes are anchored so that they rise from a e^-6.9 at t=0
// to a at the junction and then fall as a exp(-6.9 (t - T_j) / T_decay).
//
// Carriers are drawn from separate random streams of the seed: stream 0 is
// the Gaussian decay carrier (started at the junction sample), stream 1 is the
// extended model's Gaussian onset, and streams 1, 2, ... are the successive
// SSIR onset draws (a draw with K = 0 is retried on the next stream). The
// extended and SSIR models therefore share their decay carrier for equal seeds
// and junction times.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roomlab/audio.h"
#include "roomlab/rap.h"

namespace roomlab {

/// Default event-rate coefficient lambda of the SSIR onset process.
inline constexpr double kDefaultEventRate = 0.0399;

struct ExtendedParams {
  double a = 1.0;       // gain
  double t_h = 0.0;     // s, rise
  double t_t = 0.0;     // s, decay
  double total_t = 0.0; // s

  void Validate() const;
};

enum class SpikeAmplitude {
  kRandomSign,  // +-1
  kGaussian,    // N(0, 1)
};

struct SsirParams {
  double a = 1.0;        // gain
  double t_i = 0.0;      // s, onset duration
  double t_d = 0.0;      // s, decay constant
  double total_t = 0.0;  // s
  double lambda = kDefaultEventRate;
  std::optional<double> volume;  // m^3; required for generation
  SpikeAmplitude spikes = SpikeAmplitude::kRandomSign;

  void Validate() const;
};

double ExtendedEnvelope(const ExtendedParams& p, double t);
double SsirEnvelope(const SsirParams& p, double t);

Rir GenerateSchroeder(double a, double t60, double total_t, std::uint64_t seed,
                      int sample_rate = kPipelineSampleRate);

Rir GenerateExtended(const ExtendedParams& p, std::uint64_t seed,
                     int sample_rate = kPipelineSampleRate);

struct SsirRealization {
  Rir rir;
  /// Sample indices of the onset events (may repeat on collisions).
  std::vector<std::size_t> onset_events;
  /// Number of onset sample positions, i.e. samples with t < T_i.
  std::size_t onset_samples = 0;
  /// 1 + number of K = 0 redraws.
  int attempts = 1;
};

SsirRealization RealizeSsir(const SsirParams& p, std::uint64_t seed,
                            int sample_rate = kPipelineSampleRate);

Rir GenerateSsir(const SsirParams& p, std::uint64_t seed,
                 int sample_rate = kPipelineSampleRate);

/// Two-segment envelope fitted to a response.
///   decay_s: from the -5..-35 dB least-squares slope of the Schroeder curve
///            (envelope convention exp(-6.9 t / decay_s)).
///   onset_s: junction time t at which the decay line meets the level the
///            Schroeder curve must have there given the model's onset energy:
///            line(t) = -10 log10(1 + E_onset(t) / E_decay). For a negligible
///            onset this is where the line extrapolates to 0 dB.
///   gain:    peak of the fitted envelope, from the energy after onset_s.
struct EnvelopeFit {
  double onset_s = 0.0;
  double decay_s = 0.0;
  double gain = 0.0;
  double total_t = 0.0;
};

/// Ratio of expected onset energy to decay energy for a model with junction
/// time onset_s and decay constant decay_s.
using OnsetEnergyRatio = double (*)(double onset_s, double decay_s);

EnvelopeFit FitDecayEnvelope(const Rir& h,
                             OnsetEnergyRatio onset_ratio = nullptr);

/// Volume is copied from the RIR metadata when present.
SsirParams FitSsir(const Rir& h, double lambda = kDefaultEventRate);
ExtendedParams FitExtended(const Rir& h);

struct ComparisonInput {
  std::string name;
  Rir rir;
};

struct CompareOptions {
  std::uint64_t seed = 0;
  /// Used for the SSIR onset when a response has no volume metadata.
  double default_volume = 200.0;
  double lambda = kDefaultEventRate;
  AnalyzeOptions analyze;
};

/// Mean absolute error of each RAP (kRapNames order) between the input
/// responses and their fitted-and-regenerated counterparts.
struct ModelComparison {
  std::size_t num_rirs = 0;
  std::array<double, 8> extended_mae{};
  std::array<double, 8> ssir_mae{};
  /// (name, reason) for every response that could not be used.
  std::vector<std::pair<std::string, std::string>> skipped;
};

ModelComparison CompareModels(const std::vector<ComparisonInput>& inputs,
                              const CompareOptions& options);

/// Two rows (extended, ssir) under a model,sti,...,ts header; header only
/// when no response was compared.
void WriteComparisonCsv(std::ostream& os, const ModelComparison& cmp);

}  // namespace roomlab

#endif  // ROOMLAB_SSIR_H_
