// src/signal.cc

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

#include "roomlab/signal.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "fft.h"

namespace roomlab {

namespace {

// Below this many multiply-adds the direct sum is cheaper than the FFT.
constexpr std::size_t kDirectConvolutionWork = 1 << 16;

std::vector<double> ConvolveDirect(std::span<const double> x,
                                   std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += xi * h[j];
  }
  return y;
}

std::vector<double> ConvolveFft(std::span<const double> x,
                                std::span<const double> h) {
  const std::size_t out_len = x.size() + h.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  internal::RealFft fft(n);
  std::vector<std::complex<double>> xs(fft.num_bins()), hs(fft.num_bins());
  fft.Forward(x, xs);
  fft.Forward(h, hs);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] *= hs[k];
  std::vector<double> y(n);
  fft.Inverse(xs, y);
  y.resize(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : y) v *= scale;
  return y;
}

}  // namespace

std::vector<double> Convolve(std::span<const double> x,
                             std::span<const double> h) {
  if (x.empty() || h.empty()) throw Error("Convolve: empty input");
  if (x.size() * h.size() <= kDirectConvolutionWork ||
      std::min(x.size(), h.size()) < 64) {
    return x.size() >= h.size() ? ConvolveDirect(x, h) : ConvolveDirect(h, x);
  }
  return ConvolveFft(x, h);
}

AudioClip Convolve(const AudioClip& x, const Rir& h) {
  if (x.sample_rate() != h.sample_rate()) {
    std::ostringstream os;
    os << "Convolve: sample-rate mismatch (signal " << x.sample_rate()
       << " Hz, RIR " << h.sample_rate() << " Hz)";
    throw Error(os.str());
  }
  return AudioClip(Convolve(x.samples(), h.samples()), x.sample_rate());
}

std::vector<double> TileToLength(std::span<const double> noise,
                                 std::size_t length) {
  if (noise.empty()) throw Error("TileToLength: empty noise");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

double SnrNoiseGain(double signal_power, double noise_power, double snr_db) {
  if (!(signal_power > 0.0)) throw Error("MixAtSnr: zero-power signal");
  if (!(noise_power > 0.0)) throw Error("MixAtSnr: zero-power noise");
  return std::sqrt(signal_power /
                   (noise_power * std::pow(10.0, snr_db / 10.0)));
}

AudioClip MixAtSnr(const AudioClip& signal, const AudioClip& noise,
                   double snr_db) {
  if (signal.sample_rate() != noise.sample_rate()) {
    std::ostringstream os;
    os << "MixAtSnr: sample-rate mismatch (signal " << signal.sample_rate()
       << " Hz, noise " << noise.sample_rate() << " Hz)";
    throw Error(os.str());
  }
  if (std::isnan(snr_db) || snr_db == -kInfiniteSnr)
    throw Error("MixAtSnr: invalid SNR");
  if (snr_db == kInfiniteSnr) return signal;

  std::vector<double> tiled = TileToLength(noise.samples(), signal.size());
  const double g =
      SnrNoiseGain(MeanPower(signal.samples()), MeanPower(tiled), snr_db);
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = signal[i] + g * tiled[i];
  return AudioClip(std::move(out), signal.sample_rate());
}

AudioClip PeakNormalize(const AudioClip& x) {
  double peak = 0.0;
  for (double v : x.samples()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw Error("PeakNormalize: all-zero clip");
  if (peak == 1.0) return x;
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v /= peak;
  return AudioClip(std::move(out), x.sample_rate());
}

DecayCurve SchroederDecay(std::span<const double> h, int sample_rate) {
  if (h.empty()) throw Error("SchroederDecay: empty impulse response");
  // Backward cumulative energy; each step adds a non-negative term, so the
  // curve is non-increasing and tail[0] is the total.
  std::vector<double> tail(h.size());
  double acc = 0.0;
  for (std::size_t i = h.size(); i-- > 0;) {
    acc += h[i] * h[i];
    tail[i] = acc;
  }
  const double total = tail[0];
  if (!(total > 0.0)) throw Error("SchroederDecay: zero-energy impulse response");
  DecayCurve curve;
  curve.sample_rate = sample_rate;
  curve.values_db.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double ratio = tail[i] / total;
    curve.values_db[i] =
        ratio > 0.0 ? std::max(10.0 * std::log10(ratio), kDecayFloorDb)
                    : kDecayFloorDb;
  }
  curve.values_db[0] = 0.0;
  return curve;
}

DecayCurve SchroederDecay(const Rir& h) {
  return SchroederDecay(h.samples(), h.sample_rate());
}

}  // namespace roomlab
