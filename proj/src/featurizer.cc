// src/featurizer.cc

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

#include "roomlab/featurizer.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fft.h"

namespace roomlab {

namespace {

using std::numbers::pi;

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * pi * i / n);
  return w;
}

double HzToMel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double MelToHz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

double ErbRate(double f) { return 21.4 * std::log10(1.0 + 0.00437 * f); }
double ErbRateToHz(double e) {
  return (std::pow(10.0, e / 21.4) - 1.0) / 0.00437;
}
double Erb(double f) { return 24.7 * (4.37 * f / 1000.0 + 1.0); }

// Triangular weights mapping linear-frequency power bins onto output bands.
// Row j has its peak at centers[j] and feet at edges[j], edges[j + 2].
std::vector<std::vector<double>> TriangularBank(
    const std::vector<double>& edges, std::size_t num_bins,
    double bin_spacing_hz) {
  const std::size_t bands = edges.size() - 2;
  std::vector<std::vector<double>> bank(bands,
                                        std::vector<double>(num_bins, 0.0));
  for (std::size_t j = 0; j < bands; ++j) {
    const double lo = edges[j], mid = edges[j + 1], hi = edges[j + 2];
    for (std::size_t k = 0; k < num_bins; ++k) {
      const double f = k * bin_spacing_hz;
      double w = 0.0;
      if (f >= lo && f <= mid && mid > lo) w = (f - lo) / (mid - lo);
      else if (f > mid && f <= hi && hi > mid) w = (hi - f) / (hi - mid);
      bank[j][k] = std::max(0.0, w);
    }
  }
  return bank;
}

std::vector<double> LinearEdges(std::size_t bins, double nyquist) {
  // Centers j * nyquist / (bins - 1); neighbouring triangles overlap so that
  // the weights over any frequency in [0, nyquist] sum to one.
  const double step = nyquist / static_cast<double>(bins - 1);
  std::vector<double> edges(bins + 2);
  for (std::size_t j = 0; j < edges.size(); ++j)
    edges[j] = (static_cast<double>(j) - 1.0) * step;
  return edges;
}

std::vector<double> MelEdges(std::size_t bins, double nyquist) {
  const double top = HzToMel(nyquist);
  std::vector<double> edges(bins + 2);
  for (std::size_t j = 0; j < edges.size(); ++j)
    edges[j] = MelToHz(top * j / static_cast<double>(bins + 1));
  return edges;
}

std::vector<double> GammatoneCenters(std::size_t bins, double low, double high) {
  const double e_lo = ErbRate(low), e_hi = ErbRate(high);
  std::vector<double> centers(bins);
  for (std::size_t j = 0; j < bins; ++j)
    centers[j] = ErbRateToHz(e_lo + (e_hi - e_lo) * j / static_cast<double>(bins - 1));
  return centers;
}

FeatureMatrix EmptyMatrix(FeatureKind kind, const AudioClip& x,
                          const FeatureConfig& cfg) {
  FeatureMatrix m;
  m.kind = kind;
  m.bins = cfg.bins;
  m.frames = NumFrames(x.size(), cfg);
  m.hop = cfg.hop;
  m.window = cfg.window;
  m.sample_rate = x.sample_rate();
  m.values.assign(m.bins * m.frames, 0.0);
  return m;
}

FeatureMatrix ApplyBank(FeatureKind kind, const AudioClip& x,
                        const FeatureConfig& cfg,
                        const std::vector<std::vector<double>>& bank) {
  FeatureMatrix m = EmptyMatrix(kind, x, cfg);
  const auto spectra = FramePowerSpectra(x, cfg);
  for (std::size_t t = 0; t < m.frames; ++t) {
    for (std::size_t j = 0; j < m.bins; ++j) {
      double acc = 0.0;
      const auto& w = bank[j];
      for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * spectra[t][k];
      m.at(j, t) = acc;
    }
  }
  return m;
}

FeatureMatrix Spectrogram(const AudioClip& x, const FeatureConfig& cfg) {
  const double nyquist = x.sample_rate() / 2.0;
  const auto bank = TriangularBank(LinearEdges(cfg.bins, nyquist),
                                   cfg.window / 2 + 1,
                                   static_cast<double>(x.sample_rate()) / cfg.window);
  return ApplyBank(FeatureKind::kSpectrogram, x, cfg, bank);
}

FeatureMatrix MelSpectrogram(const AudioClip& x, const FeatureConfig& cfg) {
  const double nyquist = x.sample_rate() / 2.0;
  const auto bank = TriangularBank(MelEdges(cfg.bins, nyquist),
                                   cfg.window / 2 + 1,
                                   static_cast<double>(x.sample_rate()) / cfg.window);
  return ApplyBank(FeatureKind::kMel, x, cfg, bank);
}

FeatureMatrix Mfcc(const AudioClip& x, const FeatureConfig& cfg) {
  FeatureMatrix mel = MelSpectrogram(x, cfg);
  FeatureMatrix m = EmptyMatrix(FeatureKind::kMfcc, x, cfg);
  const std::size_t n = cfg.bins;
  // Orthonormal DCT-II of the log-mel (dB) column.
  std::vector<double> basis(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (std::size_t i = 0; i < n; ++i)
      basis[k * n + i] = scale * std::cos(pi * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  std::vector<double> column(n);
  for (std::size_t t = 0; t < m.frames; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      column[i] = 10.0 * std::log10(std::max(mel.at(i, t), cfg.log_floor));
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += basis[k * n + i] * column[i];
      m.at(k, t) = acc;
    }
  }
  return m;
}

// Fourth-order gammatone per channel, realized as demodulation to baseband,
// four cascaded unity-gain one-pole low-passes and remodulation. The frame
// value is the windowed energy of the real filter output.
FeatureMatrix Gammatonegram(const AudioClip& x, const FeatureConfig& cfg) {
  FeatureMatrix m = EmptyMatrix(FeatureKind::kGammatone, x, cfg);
  const int fs = x.sample_rate();
  const auto centers =
      GammatoneCenters(cfg.bins, cfg.gammatone_low_hz, fs / 2.0);
  const auto window = HannWindow(cfg.window);
  const auto s = x.samples();
  std::vector<double> y(s.size());
  constexpr std::size_t kReseed = 1024;

  for (std::size_t j = 0; j < cfg.bins; ++j) {
    const double omega = 2.0 * pi * centers[j] / fs;
    const double pole = std::exp(-2.0 * pi * 1.019 * Erb(centers[j]) / fs);
    const double in_gain = 1.0 - pole;
    const std::complex<double> step = std::polar(1.0, omega);
    std::complex<double> rot = 1.0;
    std::complex<double> z1 = 0.0, z2 = 0.0, z3 = 0.0, z4 = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      if (n % kReseed == 0) rot = std::polar(1.0, omega * n);
      const std::complex<double> base = s[n] * std::conj(rot);
      z1 = in_gain * base + pole * z1;
      z2 = in_gain * z1 + pole * z2;
      z3 = in_gain * z2 + pole * z3;
      z4 = in_gain * z3 + pole * z4;
      y[n] = 2.0 * (z4 * rot).real();
      rot *= step;
    }
    for (std::size_t t = 0; t < m.frames; ++t) {
      const std::size_t start = t * cfg.hop;
      double acc = 0.0;
      for (std::size_t i = 0; i < cfg.window; ++i) {
        const double v = window[i] * y[start + i];
        acc += v * v;
      }
      m.at(j, t) = acc;
    }
  }
  return m;
}

}  // namespace

std::string KindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kSpectrogram: return "spectrogram";
    case FeatureKind::kMel: return "mel";
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kGammatone: return "gammatone";
  }
  return "unknown";
}

FeatureKind ParseKind(const std::string& name) {
  for (FeatureKind k : {FeatureKind::kSpectrogram, FeatureKind::kMel,
                        FeatureKind::kMfcc, FeatureKind::kGammatone}) {
    if (KindName(k) == name) return k;
  }
  throw Error("unknown feature kind '" + name +
              "' (expected spectrogram, mel, mfcc or gammatone)");
}

std::size_t NumFrames(std::size_t length, const FeatureConfig& cfg) {
  if (length < cfg.window) {
    std::ostringstream os;
    os << "Featurize: input of " << length << " samples is too short; at least "
       << cfg.window << " samples are required";
    throw Error(os.str());
  }
  return (length - cfg.window) / cfg.hop + 1;
}

std::vector<std::vector<double>> FramePowerSpectra(const AudioClip& x,
                                                   const FeatureConfig& cfg) {
  const std::size_t frames = NumFrames(x.size(), cfg);
  const auto window = HannWindow(cfg.window);
  internal::RealFft fft(cfg.window);
  std::vector<double> frame(cfg.window);
  std::vector<std::complex<double>> spec(fft.num_bins());
  std::vector<std::vector<double>> out(frames);
  const double n = static_cast<double>(cfg.window);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto s = x.samples().subspan(t * cfg.hop, cfg.window);
    for (std::size_t i = 0; i < cfg.window; ++i) frame[i] = window[i] * s[i];
    fft.Forward(frame, spec);
    auto& p = out[t];
    p.resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      // DC and Nyquist appear once in the full spectrum, the rest twice.
      const bool edge = k == 0 || (cfg.window % 2 == 0 && k == spec.size() - 1);
      p[k] = std::norm(spec[k]) / n * (edge ? 1.0 : 2.0);
    }
  }
  return out;
}

std::vector<double> FrameEnergies(const AudioClip& x, const FeatureConfig& cfg) {
  const std::size_t frames = NumFrames(x.size(), cfg);
  const auto window = HannWindow(cfg.window);
  std::vector<double> out(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < cfg.window; ++i) {
      const double v = window[i] * x[t * cfg.hop + i];
      out[t] += v * v;
    }
  }
  return out;
}

std::vector<double> BinCenters(FeatureKind kind, int sample_rate,
                               const FeatureConfig& cfg) {
  const double nyquist = sample_rate / 2.0;
  std::vector<double> edges;
  switch (kind) {
    case FeatureKind::kSpectrogram:
      edges = LinearEdges(cfg.bins, nyquist);
      break;
    case FeatureKind::kMel:
      edges = MelEdges(cfg.bins, nyquist);
      break;
    case FeatureKind::kGammatone:
      return GammatoneCenters(cfg.bins, cfg.gammatone_low_hz, nyquist);
    case FeatureKind::kMfcc: {
      std::vector<double> idx(cfg.bins);
      for (std::size_t k = 0; k < cfg.bins; ++k) idx[k] = static_cast<double>(k);
      return idx;
    }
  }
  return {edges.begin() + 1, edges.end() - 1};
}

FeatureMatrix Featurize(const AudioClip& x, FeatureKind kind,
                        const FeatureConfig& cfg) {
  RequirePipelineRate(x, "Featurize");
  if (cfg.bins < 2 || cfg.hop == 0 || cfg.window < 2)
    throw Error("Featurize: invalid configuration");
  switch (kind) {
    case FeatureKind::kSpectrogram: return Spectrogram(x, cfg);
    case FeatureKind::kMel: return MelSpectrogram(x, cfg);
    case FeatureKind::kMfcc: return Mfcc(x, cfg);
    case FeatureKind::kGammatone: return Gammatonegram(x, cfg);
  }
  throw Error("Featurize: unknown kind");
}

void WriteFeatures(const std::filesystem::path& stem, const FeatureMatrix& m) {
  auto data_path = stem;
  data_path += ".f32";
  auto meta_path = stem;
  meta_path += ".json";
  {
    std::ofstream os(data_path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("WriteFeatures: cannot open " + data_path.string());
    for (double v : m.values) {
      const float f = static_cast<float>(v);
      os.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
    if (!os) throw Error("WriteFeatures: write failed for " + data_path.string());
  }
  nlohmann::ordered_json meta;
  meta["kind"] = KindName(m.kind);
  meta["shape"] = {m.bins, m.frames};
  meta["hop"] = m.hop;
  meta["window"] = m.window;
  meta["sample_rate"] = m.sample_rate;
  meta["dtype"] = "float32";
  meta["layout"] = "row-major (frequency, time)";
  std::ofstream os(meta_path, std::ios::trunc);
  if (!os) throw Error("WriteFeatures: cannot open " + meta_path.string());
  os << meta.dump(2) << '\n';
}

FeatureMatrix ReadFeatures(const std::filesystem::path& stem) {
  auto data_path = stem;
  data_path += ".f32";
  auto meta_path = stem;
  meta_path += ".json";
  std::ifstream meta_is(meta_path);
  if (!meta_is) throw Error("ReadFeatures: cannot open " + meta_path.string());
  FeatureMatrix m;
  try {
    const nlohmann::json meta = nlohmann::json::parse(meta_is);
    m.kind = ParseKind(meta.at("kind").get<std::string>());
    m.bins = meta.at("shape").at(0).get<std::size_t>();
    m.frames = meta.at("shape").at(1).get<std::size_t>();
    m.hop = meta.at("hop").get<std::size_t>();
    m.window = meta.at("window").get<std::size_t>();
    m.sample_rate = meta.at("sample_rate").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("ReadFeatures: bad sidecar " + meta_path.string() + ": " + e.what());
  }
  std::ifstream is(data_path, std::ios::binary);
  if (!is) throw Error("ReadFeatures: cannot open " + data_path.string());
  std::vector<float> raw(m.bins * m.frames);
  if (!is.read(reinterpret_cast<char*>(raw.data()), raw.size() * sizeof(float)))
    throw Error("ReadFeatures: truncated " + data_path.string());
  m.values.assign(raw.begin(), raw.end());
  return m;
}

}  // namespace roomlab
