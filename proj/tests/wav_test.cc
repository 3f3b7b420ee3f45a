// tests/wav_test.cc

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

#include <cstdint>
#include <cstring>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "roomlab/wav.h"
#include "test_util.h"

namespace roomlab {
namespace {

void PutLe(std::string& s, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>(v >> (8 * i)));
}

// Hand-assembled header so the reader is not only checked against the writer.
std::string Header(std::uint16_t format, std::uint16_t channels,
                   std::uint16_t bits, std::uint32_t data_bytes,
                   bool extensible = false, bool extra_chunk = false) {
  std::string s = "RIFF";
  PutLe(s, 0, 4);
  s += "WAVE";
  if (extra_chunk) {
    s += "LIST";
    PutLe(s, 3, 4);
    s += "abc";
    s.push_back(0);  // pad byte
  }
  s += "fmt ";
  PutLe(s, extensible ? 40 : 16, 4);
  PutLe(s, extensible ? 0xFFFE : format, 2);
  PutLe(s, channels, 2);
  PutLe(s, 16000, 4);
  PutLe(s, 16000 * channels * bits / 8, 4);
  PutLe(s, channels * bits / 8, 2);
  PutLe(s, bits, 2);
  if (extensible) {
    PutLe(s, 22, 2);
    PutLe(s, bits, 2);
    PutLe(s, 4, 4);
    PutLe(s, format, 2);
    s.append(14, '\x01');
  }
  s += "data";
  PutLe(s, data_bytes, 4);
  return s;
}

TEST(WavTest, ReadsPcm16) {
  std::string s = Header(1, 1, 16, 6);
  PutLe(s, 0x4000, 2);   // 16384
  PutLe(s, 0x8000, 2);   // -32768
  PutLe(s, 0xFFFF, 2);   // -1
  std::istringstream is(s);
  const AudioClip c = ReadWav(is);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.sample_rate(), 16000);
  EXPECT_EQ(c[0], 0.5);
  EXPECT_EQ(c[1], -1.0);
  EXPECT_EQ(c[2], -1.0 / 32768.0);
}

TEST(WavTest, ReadsExtensibleFloatAfterUnknownChunk) {
  std::string s = Header(3, 1, 32, 8, true, true);
  const float v[2] = {0.25f, -0.125f};
  s.append(reinterpret_cast<const char*>(v), sizeof(v));
  std::istringstream is(s);
  const AudioClip c = ReadWav(is);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], 0.25);
  EXPECT_EQ(c[1], -0.125);
}

TEST(WavTest, RejectsStereoAndUnsupported) {
  std::string stereo = Header(1, 2, 16, 4);
  stereo.append(4, '\0');
  std::istringstream a(stereo);
  EXPECT_THROW(ReadWav(a), Error);

  std::string pcm24 = Header(1, 1, 24, 3);
  pcm24.append(3, '\0');
  std::istringstream b(pcm24);
  EXPECT_THROW(ReadWav(b), Error);
}

TEST(WavTest, RejectsTruncatedAndGarbage) {
  std::string s = Header(1, 1, 16, 100);
  s.append(10, '\0');
  std::istringstream a(s);
  EXPECT_THROW(ReadWav(a), Error);
  std::istringstream b("not a wav file at all");
  EXPECT_THROW(ReadWav(b), Error);
  std::istringstream c("");
  EXPECT_THROW(ReadWav(c), Error);
  EXPECT_THROW(ReadWav(std::filesystem::path("/nonexistent/x.wav")), Error);
}

TEST(WavTest, Float32RoundTripIsExactForFloats) {
  AudioClip x({0.5, -0.25, 0.1f, 1e-3f}, 16000);
  std::stringstream ss;
  WriteWav(ss, x);
  const AudioClip y = ReadWav(ss);
  EXPECT_EQ(y, x);
}

TEST(WavTest, Pcm16RoundTripWithinOneLsb) {
  AudioClip x({0.5, -0.3, 0.99999, -1.0, 0.0}, 8000);
  std::stringstream ss;
  WriteWav(ss, x, WavEncoding::kPcm16);
  const AudioClip y = ReadWav(ss);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_EQ(y.sample_rate(), 8000);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(y[i], x[i], 1.0 / 32768.0);
}

TEST(WavTest, FileRoundTrip) {
  const auto dir = testing::ScratchDir("wav");
  AudioClip x({0.5, -0.25}, 16000);
  WriteWav(dir / "a.wav", x);
  EXPECT_EQ(ReadWav(dir / "a.wav"), x);
}

}  // namespace
}  // namespace roomlab
