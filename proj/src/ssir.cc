// src/ssir.cc

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

#include "roomlab/ssir.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "roomlab/random.h"
#include "roomlab/signal.h"

namespace roomlab {

namespace {

constexpr double kEnvelopeDecay = 6.9;
// dB per second of energy decay for an envelope exp(-6.9 t / T) is
// -kDbPerDecayUnit / T.
const double kDbPerDecayUnit = 20.0 * kEnvelopeDecay / std::numbers::ln10;

constexpr std::uint64_t kDecayStream = 0;
constexpr std::uint64_t kOnsetStream = 1;
constexpr int kMaxOnsetAttempts = 1000;

std::size_t NumSamples(double total_t, int sample_rate) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(total_t * sample_rate)));
}

std::size_t JunctionIndex(double t, int sample_rate, std::size_t n) {
  auto idx = static_cast<std::size_t>(std::ceil(t * sample_rate - 1e-9));
  return std::min(idx, n);
}

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(std::string(what) + " must be positive and finite");
}

double RisingEnvelope(double a, double t, double t_rise) {
  return a * std::exp(-kEnvelopeDecay * (1.0 - t / t_rise));
}

double FallingEnvelope(double a, double t, double t_start, double t_decay) {
  return a * std::exp(-kEnvelopeDecay * (t - t_start) / t_decay);
}

// Fills out[first, end) with the falling envelope times a Gaussian carrier
// drawn from the decay stream.
void FillDecay(std::vector<double>& out, std::size_t first, double a,
               double t_start, double t_decay, std::uint64_t seed,
               int sample_rate) {
  Rng rng = MakeRng(seed, kDecayStream);
  std::normal_distribution<double> normal;
  for (std::size_t n = first; n < out.size(); ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    out[n] = FallingEnvelope(a, t, t_start, t_decay) * normal(rng);
  }
}

}  // namespace

void ExtendedParams::Validate() const {
  RequirePositive(a, "ExtendedParams: a");
  RequirePositive(t_h, "ExtendedParams: t_h");
  RequirePositive(t_t, "ExtendedParams: t_t");
  RequirePositive(total_t, "ExtendedParams: total_t");
  if (!(t_h < total_t)) throw Error("ExtendedParams: t_h must be < total_t");
}

void SsirParams::Validate() const {
  RequirePositive(a, "SsirParams: a");
  RequirePositive(t_i, "SsirParams: t_i");
  RequirePositive(t_d, "SsirParams: t_d");
  RequirePositive(total_t, "SsirParams: total_t");
  RequirePositive(lambda, "SsirParams: lambda");
  if (!(t_i < total_t)) throw Error("SsirParams: t_i must be < total_t");
  if (volume) RequirePositive(*volume, "SsirParams: volume");
}

double ExtendedEnvelope(const ExtendedParams& p, double t) {
  return t < p.t_h ? RisingEnvelope(p.a, t, p.t_h)
                   : FallingEnvelope(p.a, t, p.t_h, p.t_t);
}

double SsirEnvelope(const SsirParams& p, double t) {
  return t < p.t_i ? RisingEnvelope(p.a, t, p.t_i)
                   : FallingEnvelope(p.a, t, p.t_i, p.t_d);
}

Rir GenerateSchroeder(double a, double t60, double total_t, std::uint64_t seed,
                      int sample_rate) {
  RequirePositive(a, "GenerateSchroeder: a");
  RequirePositive(t60, "GenerateSchroeder: t60");
  RequirePositive(total_t, "GenerateSchroeder: total_t");
  std::vector<double> h(NumSamples(total_t, sample_rate));
  FillDecay(h, 0, a, 0.0, t60, seed, sample_rate);
  return Rir(AudioClip(std::move(h), sample_rate));
}

Rir GenerateExtended(const ExtendedParams& p, std::uint64_t seed,
                     int sample_rate) {
  p.Validate();
  std::vector<double> h(NumSamples(p.total_t, sample_rate));
  const std::size_t junction = JunctionIndex(p.t_h, sample_rate, h.size());
  Rng rng = MakeRng(seed, kOnsetStream);
  std::normal_distribution<double> normal;
  for (std::size_t n = 0; n < junction; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    h[n] = RisingEnvelope(p.a, t, p.t_h) * normal(rng);
  }
  FillDecay(h, junction, p.a, p.t_h, p.t_t, seed, sample_rate);
  return Rir(AudioClip(std::move(h), sample_rate));
}

SsirRealization RealizeSsir(const SsirParams& p, std::uint64_t seed,
                            int sample_rate) {
  p.Validate();
  if (!p.volume) throw Error("GenerateSsir: room volume is required");
  std::vector<double> h(NumSamples(p.total_t, sample_rate));
  // At least one onset position, so that every event has a sample to land on.
  const std::size_t junction =
      std::max<std::size_t>(1, JunctionIndex(p.t_i, sample_rate, h.size()));

  std::vector<std::size_t> events;
  int attempt = 0;
  for (; attempt < kMaxOnsetAttempts; ++attempt) {
    Rng rng = MakeRng(seed, kOnsetStream + attempt);
    std::poisson_distribution<int> count(p.lambda * *p.volume);
    const int k = count(rng);
    if (k == 0) continue;
    std::uniform_real_distribution<double> when(0.0, p.t_i);
    std::bernoulli_distribution sign;
    std::normal_distribution<double> normal;
    events.reserve(k);
    for (int e = 0; e < k; ++e) {
      const auto idx = std::min(
          junction - 1,
          static_cast<std::size_t>(std::floor(when(rng) * sample_rate)));
      const double amplitude = p.spikes == SpikeAmplitude::kRandomSign
                                   ? (sign(rng) ? 1.0 : -1.0)
                                   : normal(rng);
      const double t = static_cast<double>(idx) / sample_rate;
      h[idx] += RisingEnvelope(p.a, t, p.t_i) * amplitude;
      events.push_back(idx);
    }
    break;
  }
  if (events.empty()) {
    throw Error("GenerateSsir: onset process produced no events after " +
                std::to_string(kMaxOnsetAttempts) + " draws");
  }
  FillDecay(h, junction, p.a, p.t_i, p.t_d, seed, sample_rate);

  SsirRealization out{Rir(AudioClip(std::move(h), sample_rate), p.volume),
                      std::move(events), junction, attempt + 1};
  return out;
}

Rir GenerateSsir(const SsirParams& p, std::uint64_t seed, int sample_rate) {
  return RealizeSsir(p, seed, sample_rate).rir;
}

EnvelopeFit FitDecayEnvelope(const Rir& h, OnsetEnergyRatio onset_ratio) {
  const DecayCurve edc = SchroederDecay(h);
  DecayLine line;
  try {
    line = FitDecayLine(edc, -5.0, -35.0, "fit");
  } catch (const AnalysisError& e) {
    throw Error(std::string("FitDecayEnvelope: no identifiable decay (") +
                e.what() + ")");
  }
  const int fs = h.sample_rate();
  EnvelopeFit fit;
  fit.total_t = h.clip().duration();
  fit.decay_s = -kDbPerDecayUnit / line.slope_db_per_s;
  const double step = 1.0 / fs;
  auto mismatch = [&](double t) {
    const double ratio = onset_ratio ? onset_ratio(t, fit.decay_s) : 0.0;
    return line.intercept_db + line.slope_db_per_s * t +
           10.0 * std::log10(1.0 + ratio);
  };
  // mismatch() falls with t (the line is steeper than the correction), so
  // bisect for its root inside the response.
  double lo = step, hi = fit.total_t - step;
  if (mismatch(lo) <= 0.0) {
    hi = lo;
  } else if (mismatch(hi) >= 0.0) {
    lo = hi;
  }
  for (int iter = 0; iter < 60 && hi - lo > 1e-9; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (mismatch(mid) > 0.0 ? lo : hi) = mid;
  }
  fit.onset_s = 0.5 * (lo + hi);

  // Peak of the fitted envelope from the energy it must carry after the
  // onset: sum_k a^2 r^k over the remaining samples.
  const std::size_t first = JunctionIndex(fit.onset_s, fs, h.size());
  const double tail = Energy(h.samples().subspan(first));
  const double r = std::exp(-2.0 * kEnvelopeDecay / (fit.decay_s * fs));
  const double m = static_cast<double>(h.size() - first);
  const double geometric = (1.0 - std::pow(r, m)) / (1.0 - r);
  fit.gain = std::sqrt(tail / geometric);
  if (!(fit.gain > 0.0)) throw Error("FitDecayEnvelope: no energy after onset");
  return fit;
}

SsirParams FitSsir(const Rir& h, double lambda) {
  const EnvelopeFit fit = FitDecayEnvelope(h);
  SsirParams p;
  p.a = fit.gain;
  p.t_i = fit.onset_s;
  p.t_d = fit.decay_s;
  p.total_t = fit.total_t;
  p.lambda = lambda;
  p.volume = h.volume();
  return p;
}

ExtendedParams FitExtended(const Rir& h) {
  // The dense rising onset integrates to a^2 T_h / 13.8 against
  // a^2 T_t / 13.8 for the decay.
  const EnvelopeFit fit = FitDecayEnvelope(
      h, [](double onset_s, double decay_s) { return onset_s / decay_s; });
  return ExtendedParams{fit.gain, fit.onset_s, fit.decay_s, fit.total_t};
}

ModelComparison CompareModels(const std::vector<ComparisonInput>& inputs,
                              const CompareOptions& options) {
  ModelComparison out;
  std::array<double, 8> ext_sum{}, ssir_sum{};
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ComparisonInput& in = inputs[i];
    const std::uint64_t seed = options.seed + i;
    try {
      const RapSet truth = Analyze(in.rir, options.analyze);
      SsirParams ps = FitSsir(in.rir, options.lambda);
      if (!ps.volume) ps.volume = options.default_volume;
      const ExtendedParams pe = FitExtended(in.rir);
      const int fs = in.rir.sample_rate();
      const RapSet from_ssir = Analyze(GenerateSsir(ps, seed, fs), options.analyze);
      const RapSet from_ext =
          Analyze(GenerateExtended(pe, seed, fs), options.analyze);
      const auto t = ToArray(truth), s = ToArray(from_ssir), e = ToArray(from_ext);
      for (std::size_t k = 0; k < t.size(); ++k) {
        ssir_sum[k] += std::abs(s[k] - t[k]);
        ext_sum[k] += std::abs(e[k] - t[k]);
      }
      ++out.num_rirs;
    } catch (const Error& e) {
      out.skipped.emplace_back(in.name, e.what());
    }
  }
  if (out.num_rirs > 0) {
    for (std::size_t k = 0; k < 8; ++k) {
      out.extended_mae[k] = ext_sum[k] / out.num_rirs;
      out.ssir_mae[k] = ssir_sum[k] / out.num_rirs;
    }
  }
  return out;
}

void WriteComparisonCsv(std::ostream& os, const ModelComparison& cmp) {
  os << "model";
  for (const char* name : kRapNames) os << ',' << name;
  os << '\n';
  if (cmp.num_rirs == 0) return;
  auto row = [&](const char* model, const std::array<double, 8>& mae) {
    os << model;
    for (double v : mae) os << ',' << std::setprecision(6) << v;
    os << '\n';
  };
  row("extended", cmp.extended_mae);
  row("ssir", cmp.ssir_mae);
}

}  // namespace roomlab
