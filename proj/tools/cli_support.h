// tools/cli_support.h

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

#ifndef ROOMLAB_TOOLS_CLI_SUPPORT_H_
#define ROOMLAB_TOOLS_CLI_SUPPORT_H_

// Plumbing shared by the roomlab subcommands: JSON config files layered under
// command-line flags, row-parallel execution, logging and input discovery.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace roomlab::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Reads ROOMLAB_LOG (trace, debug, info, warn, error, off; default warn) and
/// points the default logger at stderr.
void SetupLogging();

/// Values for a subcommand's parameters, taken from a JSON config file for
/// every flag that was not given on the command line. Keys are the long flag
/// names with dashes replaced by underscores; keys that map to no flag are
/// available through Extra() and rejected unless declared with AllowKey().
class JobConfig {
 public:
  explicit JobConfig(CLI::App* app);

  template <typename T>
  CLI::Option* Add(const std::string& flag, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, var, help);
    Register(opt, [&var](const Json& j) { var = j.get<T>(); });
    return opt;
  }

  template <typename T>
  CLI::Option* Add(const std::string& flag, std::optional<T>& var,
                   const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, var, help);
    Register(opt, [&var](const Json& j) { var = j.get<T>(); });
    return opt;
  }

  /// A flag whose config value needs its own conversion.
  CLI::Option* AddWith(const std::string& flag, std::string& var,
                       const std::string& help,
                       std::function<void(const Json&)> assign) {
    CLI::Option* opt = app_->add_option(flag, var, help);
    Register(opt, std::move(assign));
    return opt;
  }

  CLI::Option* Flag(const std::string& flag, bool& var, const std::string& help);

  /// Declares a config-only key (no flag).
  void AllowKey(const std::string& key) { extra_keys_.push_back(key); }

  /// Loads --config if given. Call after parsing.
  void Resolve();

  /// Config-only value for key, if present.
  const Json* Extra(const std::string& key) const;

 private:
  void Register(CLI::Option* opt, std::function<void(const Json&)> assign);

  struct Binding {
    CLI::Option* option;
    std::function<void(const Json&)> assign;
  };
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, Binding> bindings_;
  std::vector<std::string> extra_keys_;
  Json file_ = Json::object();
};

/// Default worker count: the number of hardware threads (at least 1).
int DefaultWorkers();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. fn must not throw.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

/// Expands each argument: a directory contributes its *.wav files (sorted),
/// a file is taken as is.
std::vector<fs::path> ExpandWavInputs(const std::vector<std::string>& args);

/// Relative paths in a manifest are taken relative to the manifest's folder.
fs::path ResolvePath(const fs::path& base_dir, const std::string& p);

/// Row identifier: its "id" field, else its zero-padded index.
std::string RowId(const Json& row, std::size_t index);

/// Rejects ids that would escape the output directory.
void CheckOutputName(const std::string& name);

/// Writes text to path via a temporary file and rename, so an interrupted
/// run never leaves a truncated artifact behind.
void WriteFileAtomic(const fs::path& path, const std::string& bytes);

/// Throws when a randomized job has no seed.
std::uint64_t RequireSeed(const std::optional<std::uint64_t>& seed);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitItemFailures = 1;
inline constexpr int kExitUsage = 2;

}  // namespace roomlab::cli

#endif  // ROOMLAB_TOOLS_CLI_SUPPORT_H_
