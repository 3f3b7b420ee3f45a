// src/filters.cc

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

#include "roomlab/filters.h"

#include <cmath>
#include <numbers>

#include "roomlab/audio.h"

namespace roomlab {

namespace {

using Complex = std::complex<double>;

Complex Bilinear(Complex s, double fs2) { return (fs2 + s) / (fs2 - s); }

Biquad FromConjugatePole(Complex z, double b0, double b1, double b2) {
  Biquad q;
  q.b0 = b0;
  q.b1 = b1;
  q.b2 = b2;
  q.a1 = -2.0 * z.real();
  q.a2 = std::norm(z);
  return q;
}

// Analog Butterworth prototype poles of the given order (unit cutoff),
// upper half plane only; the remaining ones are their conjugates.
std::vector<Complex> PrototypeUpperPoles(int order) {
  std::vector<Complex> poles;
  for (int k = 0; k < order / 2; ++k) {
    const double theta =
        std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    poles.push_back(std::polar(1.0, theta));
  }
  return poles;
}

BiquadCascade DesignBandPass(double f_lo, double f_hi, int fs) {
  const double fs2 = 2.0 * fs;
  const double w_lo = fs2 * std::tan(std::numbers::pi * f_lo / fs);
  const double w_hi = fs2 * std::tan(std::numbers::pi * f_hi / fs);
  const double bw = w_hi - w_lo;
  const double w0_sq = w_lo * w_hi;

  // Second-order prototype -> fourth-order band-pass: the single upper pole
  // maps to two analog poles, each paired with its conjugate.
  const Complex p = PrototypeUpperPoles(2).front() * (bw / 2.0);
  const Complex root = std::sqrt(p * p - w0_sq);
  const Complex s_a = p + root, s_b = p - root;

  // Gain: bw^2 (2fs)^2 / prod(2fs - s) over all four analog poles.
  Complex denom = (fs2 - s_a) * (fs2 - std::conj(s_a)) * (fs2 - s_b) *
                  (fs2 - std::conj(s_b));
  const double gain = (bw * bw * fs2 * fs2 / denom).real();

  // Two zeros at z = 1 (from s = 0) and two at z = -1 (from infinity).
  return {FromConjugatePole(Bilinear(s_a, fs2), gain, 0.0, -gain),
          FromConjugatePole(Bilinear(s_b, fs2), 1.0, 0.0, -1.0)};
}

BiquadCascade DesignHighPass(double f_lo, int fs) {
  const double fs2 = 2.0 * fs;
  const double w_lo = fs2 * std::tan(std::numbers::pi * f_lo / fs);
  BiquadCascade cascade;
  double gain = 1.0;
  for (Complex proto : PrototypeUpperPoles(4)) {
    const Complex s = w_lo / proto;
    gain *= (fs2 * fs2 / ((fs2 - s) * (fs2 - std::conj(s)))).real();
    cascade.push_back(FromConjugatePole(Bilinear(s, fs2), 1.0, -2.0, 1.0));
  }
  cascade.front().b0 *= gain;
  cascade.front().b1 *= gain;
  cascade.front().b2 *= gain;
  return cascade;
}

}  // namespace

BiquadCascade DesignOctaveBand(double center_hz, int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  const double f_lo = center_hz / std::numbers::sqrt2;
  const double f_hi = center_hz * std::numbers::sqrt2;
  if (!(center_hz > 0.0) || f_lo >= 0.95 * nyquist) {
    throw Error("DesignOctaveBand: band at " + std::to_string(center_hz) +
                " Hz does not fit below Nyquist");
  }
  if (f_hi >= 0.95 * nyquist) return DesignHighPass(f_lo, sample_rate);
  return DesignBandPass(f_lo, f_hi, sample_rate);
}

std::vector<double> Filter(const BiquadCascade& cascade,
                           std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (const Biquad& q : cascade) {
    double s1 = 0.0, s2 = 0.0;  // transposed direct form II state
    for (double& v : y) {
      const double in = v;
      const double out = q.b0 * in + s1;
      s1 = q.b1 * in - q.a1 * out + s2;
      s2 = q.b2 * in - q.a2 * out;
      v = out;
    }
  }
  return y;
}

std::complex<double> FrequencyResponse(const BiquadCascade& cascade,
                                       double frequency_hz, int sample_rate) {
  const Complex z1 =
      std::polar(1.0, -2.0 * std::numbers::pi * frequency_hz / sample_rate);
  const Complex z2 = z1 * z1;
  Complex h = 1.0;
  for (const Biquad& q : cascade) {
    h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
  }
  return h;
}

}  // namespace roomlab
