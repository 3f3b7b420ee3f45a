// src/rap.cc

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

#include "roomlab/rap.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "roomlab/filters.h"
#include "sti_weights_data.h"

namespace roomlab {

namespace {

// Index of the first sample at or after `seconds`.
std::size_t SplitIndex(double seconds, int sample_rate) {
  return static_cast<std::size_t>(std::ceil(seconds * sample_rate - 1e-9));
}

double DecayTime(const DecayCurve& edc, double start_db, double end_db,
                 const char* metric) {
  return -60.0 / FitDecayLine(edc, start_db, end_db, metric).slope_db_per_s;
}

}  // namespace

std::vector<double> StandardModulationFrequencies() {
  return {0.63, 0.8, 1.0, 1.25, 1.6, 2.0, 2.5,
          3.15, 4.0, 5.0, 6.3,  8.0, 10.0, 12.5};
}

DecayLine FitDecayLine(const DecayCurve& edc, double start_db, double end_db,
                       const std::string& metric) {
  const auto& v = edc.values_db;
  auto first = std::find_if(v.begin(), v.end(),
                            [&](double x) { return x <= start_db; });
  auto last =
      std::find_if(first, v.end(), [&](double x) { return x < end_db; });
  if (last == v.end() || last - first < 2) {
    std::ostringstream os;
    os << "insufficient decay range (curve must fall from " << start_db
       << " dB below " << end_db << " dB)";
    throw AnalysisError(metric, os.str());
  }
  const std::size_t lo = first - v.begin(), hi = last - v.begin();
  const double n = static_cast<double>(hi - lo);
  double mean_t = 0.0, mean_v = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    mean_t += edc.TimeAt(i);
    mean_v += v[i];
  }
  mean_t /= n;
  mean_v /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double dt = edc.TimeAt(i) - mean_t;
    cov += dt * (v[i] - mean_v);
    var += dt * dt;
  }
  DecayLine line;
  line.slope_db_per_s = cov / var;
  line.intercept_db = mean_v - line.slope_db_per_s * mean_t;
  if (!(line.slope_db_per_s < 0.0))
    throw AnalysisError(metric, "non-decaying curve");
  return line;
}

std::array<double, 8> ToArray(const RapSet& r) {
  return {r.sti, r.alcons, r.t60, r.edt, r.c80, r.c50, r.d50, r.ts};
}

void BandWeights::Validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error("BandWeights: weights must be finite and non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "BandWeights: weights sum to " << sum << ", expected 1";
    throw Error(os.str());
  }
}

BandWeights BandWeights::FromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("BandWeights: bad JSON: ") + e.what());
  }
  if (!j.contains("weights") || !j["weights"].is_array() ||
      j["weights"].size() != kNumOctaveBands) {
    throw Error("BandWeights: expected a 'weights' array of 7 numbers");
  }
  if (j.contains("octave_bands_hz")) {
    const auto& bands = j["octave_bands_hz"];
    for (std::size_t k = 0; k < kNumOctaveBands; ++k) {
      if (!bands.is_array() || bands.size() != kNumOctaveBands ||
          bands[k].get<double>() != kOctaveBandCentersHz[k])
        throw Error("BandWeights: octave_bands_hz must be 125..8000 Hz");
    }
  }
  BandWeights out;
  for (std::size_t k = 0; k < kNumOctaveBands; ++k) {
    if (!j["weights"][k].is_number())
      throw Error("BandWeights: non-numeric weight");
    out.weights[k] = j["weights"][k].get<double>();
  }
  out.Validate();
  return out;
}

BandWeights BandWeights::FromJsonFile(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("BandWeights: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return FromJsonText(ss.str());
}

const BandWeights& BandWeights::Default() {
  static const BandWeights weights = FromJsonText(internal::kStiWeightsJson);
  return weights;
}

double T60FromDecay(const DecayCurve& edc) {
  return DecayTime(edc, -5.0, -35.0, "t60");
}

double EdtFromDecay(const DecayCurve& edc) {
  return DecayTime(edc, 0.0, -10.0, "edt");
}

double Clarity(const Rir& h, double early_ms) {
  const std::string metric = "c" + std::to_string(std::lround(early_ms));
  const std::size_t split = SplitIndex(early_ms / 1000.0, h.sample_rate());
  if (h.size() <= split) {
    throw AnalysisError(metric, "impulse response shorter than the " +
                                    std::to_string(early_ms) + " ms split");
  }
  auto s = h.samples();
  const double early = Energy(s.first(split));
  const double late = Energy(s.subspan(split));
  if (late == 0.0) throw AnalysisError(metric, "clarity unbounded (no late energy)");
  if (early == 0.0) throw AnalysisError(metric, "clarity unbounded (no early energy)");
  return 10.0 * std::log10(early / late);
}

double Definition(const Rir& h) {
  const std::size_t split =
      std::min(SplitIndex(0.050, h.sample_rate()), h.size());
  return 100.0 * Energy(h.samples().first(split)) / h.energy();
}

double CenterTime(const Rir& h) {
  double moment = 0.0;
  auto s = h.samples();
  for (std::size_t i = 0; i < s.size(); ++i)
    moment += static_cast<double>(i) * s[i] * s[i];
  return moment / h.energy() / h.sample_rate();
}

MtfMatrix Mtf(const Rir& h, const std::vector<double>& modulation_freqs) {
  if (modulation_freqs.empty()) throw Error("Mtf: no modulation frequencies");
  MtfMatrix out;
  out.modulation_freqs = modulation_freqs;
  const int fs = h.sample_rate();
  // Phasor rotation is re-seeded exactly every block to bound drift.
  constexpr std::size_t kReseed = 1024;

  for (std::size_t k = 0; k < kNumOctaveBands; ++k) {
    auto& row = out.values[k];
    row.assign(modulation_freqs.size(), 0.0);
    std::vector<double> band;
    try {
      band = Filter(DesignOctaveBand(kOctaveBandCentersHz[k], fs), h.samples());
    } catch (const Error&) {
      out.band_valid[k] = false;
      continue;
    }
    for (double& v : band) v *= v;
    const double total = std::accumulate(band.begin(), band.end(), 0.0);
    if (!(total > 0.0)) {
      out.band_valid[k] = false;
      continue;
    }
    out.band_valid[k] = true;
    for (std::size_t f = 0; f < modulation_freqs.size(); ++f) {
      const double omega =
          2.0 * std::numbers::pi * modulation_freqs[f] / fs;
      const std::complex<double> step = std::polar(1.0, -omega);
      std::complex<double> acc = 0.0, phasor = 1.0;
      for (std::size_t n = 0; n < band.size(); ++n) {
        if (n % kReseed == 0) phasor = std::polar(1.0, -omega * n);
        acc += band[n] * phasor;
        phasor *= step;
      }
      row[f] = std::clamp(std::abs(acc) / total, 0.0, 1.0);
    }
  }
  return out;
}

double Sti(const MtfMatrix& mtf, const BandWeights& weights) {
  weights.Validate();
  // Written as 1 - sum(w * (1 - MTI)) so that a perfect channel gives
  // exactly 1 regardless of rounding in the weight table.
  double loss = 0.0;
  for (std::size_t k = 0; k < kNumOctaveBands; ++k) {
    if (!mtf.band_valid[k]) {
      throw AnalysisError("sti", "no energy in the " +
                                     std::to_string(static_cast<int>(
                                         kOctaveBandCentersHz[k])) +
                                     " Hz octave band");
    }
    const auto& row = mtf.values[k];
    if (row.empty()) throw AnalysisError("sti", "empty MTF row");
    double mti = 0.0;
    for (double m : row) {
      double snr;
      if (m >= 1.0) {
        snr = 15.0;
      } else if (m <= 0.0) {
        snr = -15.0;
      } else {
        snr = std::clamp(10.0 * std::log10(m / (1.0 - m)), -15.0, 15.0);
      }
      mti += (snr + 15.0) / 30.0;
    }
    mti /= static_cast<double>(row.size());
    loss += weights.weights[k] * (1.0 - mti);
  }
  return std::clamp(1.0 - loss, 0.0, 1.0);
}

double AlconsFromSti(double sti) {
  if (!(sti >= 0.0 && sti <= 1.0))
    throw Error("AlconsFromSti: STI must lie in [0, 1]");
  return 170.5045 * std::exp(-5.419 * sti);
}

PartialRapSet AnalyzePartial(const Rir& h, const AnalyzeOptions& options) {
  PartialRapSet out;
  auto attempt = [&](const char* name, std::optional<double>& slot,
                     const std::function<double()>& fn) {
    try {
      slot = fn();
    } catch (const Error& e) {
      out.failures[name] = e.what();
    }
  };
  const DecayCurve edc = SchroederDecay(h);
  attempt("sti", out.sti,
          [&] { return Sti(Mtf(h, options.modulation_freqs), options.weights); });
  if (out.sti) out.alcons = AlconsFromSti(*out.sti);
  else out.failures["alcons"] = "alcons: requires sti";
  attempt("t60", out.t60, [&] { return T60FromDecay(edc); });
  attempt("edt", out.edt, [&] { return EdtFromDecay(edc); });
  attempt("c80", out.c80, [&] { return Clarity(h, 80.0); });
  attempt("c50", out.c50, [&] { return Clarity(h, 50.0); });
  attempt("d50", out.d50, [&] { return Definition(h); });
  attempt("ts", out.ts, [&] { return CenterTime(h); });
  return out;
}

RapSet Analyze(const Rir& h, const AnalyzeOptions& options) {
  RapSet r;
  const DecayCurve edc = SchroederDecay(h);
  r.sti = Sti(Mtf(h, options.modulation_freqs), options.weights);
  r.alcons = AlconsFromSti(r.sti);
  r.t60 = T60FromDecay(edc);
  r.edt = EdtFromDecay(edc);
  r.c80 = Clarity(h, 80.0);
  r.c50 = Clarity(h, 50.0);
  r.d50 = Definition(h);
  r.ts = CenterTime(h);
  return r;
}

}  // namespace roomlab
