// include/roomlab/wav.h

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

#ifndef ROOMLAB_WAV_H_
#define ROOMLAB_WAV_H_

#include <filesystem>
#include <iosfwd>

#include "roomlab/audio.h"

namespace roomlab {

// RIFF/WAVE, mono only. Reads PCM16 and IEEE float32 (plain or
// WAVE_FORMAT_EXTENSIBLE headers). PCM16 maps to [-1, 1) by dividing by 32768.

enum class WavEncoding { kPcm16, kFloat32 };

AudioClip ReadWav(std::istream& is);
AudioClip ReadWav(const std::filesystem::path& path);

void WriteWav(std::ostream& os, const AudioClip& clip,
              WavEncoding encoding = WavEncoding::kFloat32);
void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace roomlab

#endif  // ROOMLAB_WAV_H_
