// tools/commands.h

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

#ifndef ROOMLAB_TOOLS_COMMANDS_H_
#define ROOMLAB_TOOLS_COMMANDS_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.h"
#include "roomlab/audio.h"
#include "roomlab/rap.h"

namespace roomlab::cli {

// Each Add*Command registers a subcommand whose callback stores its exit
// status in *exit_code.
void AddAnalyzeCommand(CLI::App& app, int* exit_code);
void AddSsirCommand(CLI::App& app, int* exit_code);
void AddSynthCommand(CLI::App& app, int* exit_code);
void AddFeaturizeCommand(CLI::App& app, int* exit_code);

/// The eight parameters keyed by name, in RapSet order.
Json RapJson(const RapSet& r);

/// One object per line.
std::string JsonLines(const std::vector<Json>& records);

/// Thread-safe memo of decoded WAV files, so that pools and shared RIRs are
/// read once per job.
class AudioCache {
 public:
  std::shared_ptr<const AudioClip> Get(const fs::path& path);

 private:
  std::mutex mu_;
  std::map<fs::path, std::shared_ptr<const AudioClip>> clips_;
};

/// Wraps a subcommand body: configuration and I/O errors are logged and
/// mapped to kExitUsage.
int Guarded(const std::function<int()>& body);

}  // namespace roomlab::cli

#endif  // ROOMLAB_TOOLS_COMMANDS_H_
