// tools/roomlab.cc

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

// roomlab: batch front end.
//
//   roomlab analyze   RIR files or folders -> JSON-lines of the eight RAPs
//   roomlab ssir      gen | fit | compare for the stochastic RIR models
//   roomlab synth     unified | occupancy corpus synthesis from manifests
//   roomlab featurize WAVs -> float32 feature tensors with JSON sidecars
//
// Exit status is 0 when every item succeeded, 1 when some item failed and
// 2 when the job could not run. ROOMLAB_LOG sets the log level.

#include <spdlog/spdlog.h>

#include "commands.h"
#include "roomlab/signal.h"
#include "roomlab/wav.h"

namespace roomlab::cli {

Json RapJson(const RapSet& r) {
  Json j = Json::object();
  const auto values = ToArray(r);
  for (std::size_t k = 0; k < values.size(); ++k) j[kRapNames[k]] = values[k];
  return j;
}

std::string JsonLines(const std::vector<Json>& records) {
  std::string out;
  for (const Json& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::shared_ptr<const AudioClip> AudioCache::Get(const fs::path& path) {
  {
    std::lock_guard lock(mu_);
    auto it = clips_.find(path);
    if (it != clips_.end()) return it->second;
  }
  auto clip = std::make_shared<const AudioClip>(ReadWav(path));
  std::lock_guard lock(mu_);
  return clips_.emplace(path, std::move(clip)).first->second;
}

int Guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }
}

}  // namespace roomlab::cli

int main(int argc, char** argv) {
  using namespace roomlab::cli;
  SetupLogging();
  CLI::App app{"Room acoustics analysis, stochastic RIR simulation and "
               "training-corpus synthesis."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "roomlab 1.0.0");
  int exit_code = kExitOk;
  AddAnalyzeCommand(app, &exit_code);
  AddSsirCommand(app, &exit_code);
  AddSynthCommand(app, &exit_code);
  AddFeaturizeCommand(app, &exit_code);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return exit_code;
}
