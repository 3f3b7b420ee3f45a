// src/wav.cc

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

#include "roomlab/wav.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace roomlab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(std::istream& is, const char* what) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw Error(std::string("ReadWav: truncated header while reading ") + what);
  }
  return v;
}

template <typename T>
void WriteLe(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::string ReadTag(std::istream& is) {
  std::array<char, 4> tag{};
  if (!is.read(tag.data(), 4)) throw Error("ReadWav: truncated chunk header");
  return std::string(tag.data(), 4);
}

}  // namespace

AudioClip ReadWav(std::istream& is) {
  if (ReadTag(is) != "RIFF") throw Error("ReadWav: missing RIFF tag");
  ReadLe<std::uint32_t>(is, "RIFF size");
  if (ReadTag(is) != "WAVE") throw Error("ReadWav: missing WAVE tag");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (true) {
    const std::string tag = ReadTag(is);
    const auto size = ReadLe<std::uint32_t>(is, "chunk size");
    if (tag == "fmt ") {
      if (size < 16) throw Error("ReadWav: fmt chunk too small");
      format = ReadLe<std::uint16_t>(is, "format");
      channels = ReadLe<std::uint16_t>(is, "channels");
      rate = ReadLe<std::uint32_t>(is, "sample rate");
      ReadLe<std::uint32_t>(is, "byte rate");
      ReadLe<std::uint16_t>(is, "block align");
      bits = ReadLe<std::uint16_t>(is, "bits per sample");
      std::uint32_t consumed = 16;
      if (format == kFormatExtensible) {
        if (size < 40) throw Error("ReadWav: extensible fmt chunk too small");
        ReadLe<std::uint16_t>(is, "cbSize");
        ReadLe<std::uint16_t>(is, "valid bits");
        ReadLe<std::uint32_t>(is, "channel mask");
        // The sub-format GUID starts with the plain format code.
        format = ReadLe<std::uint16_t>(is, "sub-format");
        consumed = 26;
      }
      is.ignore(size - consumed + (size & 1));
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw Error("ReadWav: data chunk before fmt chunk");
      if (channels != 1) {
        throw Error("ReadWav: expected mono, got " + std::to_string(channels) +
                    " channels");
      }
      if (rate == 0 || rate > 10'000'000) throw Error("ReadWav: bad sample rate");
      std::vector<double> samples;
      if (format == kFormatPcm && bits == 16) {
        std::vector<std::int16_t> raw(size / 2);
        if (!is.read(reinterpret_cast<char*>(raw.data()), raw.size() * 2))
          throw Error("ReadWav: truncated data chunk");
        samples.reserve(raw.size());
        for (std::int16_t v : raw) samples.push_back(v / 32768.0);
      } else if (format == kFormatFloat && bits == 32) {
        std::vector<float> raw(size / 4);
        if (!is.read(reinterpret_cast<char*>(raw.data()), raw.size() * 4))
          throw Error("ReadWav: truncated data chunk");
        samples.assign(raw.begin(), raw.end());
      } else {
        std::ostringstream os;
        os << "ReadWav: unsupported encoding (format " << format << ", "
           << bits << " bits); expected PCM16 or float32";
        throw Error(os.str());
      }
      return AudioClip(std::move(samples), static_cast<int>(rate));
    } else {
      is.ignore(size + (size & 1));
      if (!is) throw Error("ReadWav: truncated chunk '" + tag + "'");
    }
  }
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("ReadWav: cannot open " + path.string());
  try {
    return ReadWav(is);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void WriteWav(std::ostream& os, const AudioClip& clip, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size =
      static_cast<std::uint32_t>(clip.size() * block_align);
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate());

  os.write("RIFF", 4);
  WriteLe<std::uint32_t>(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  WriteLe<std::uint32_t>(os, 16);
  WriteLe<std::uint16_t>(os, pcm ? kFormatPcm : kFormatFloat);
  WriteLe<std::uint16_t>(os, 1);
  WriteLe<std::uint32_t>(os, rate);
  WriteLe<std::uint32_t>(os, rate * block_align);
  WriteLe<std::uint16_t>(os, block_align);
  WriteLe<std::uint16_t>(os, bits);
  os.write("data", 4);
  WriteLe<std::uint32_t>(os, data_size);
  if (pcm) {
    for (double v : clip.samples()) {
      const double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32768.0);
      WriteLe<std::int16_t>(
          os, static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
    }
  } else {
    for (double v : clip.samples()) WriteLe<float>(os, static_cast<float>(v));
  }
  if (!os) throw Error("WriteWav: write failed");
}

void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavEncoding encoding) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("WriteWav: cannot open " + path.string());
  WriteWav(os, clip, encoding);
}

}  // namespace roomlab
