// tools/cli_support.cc

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

#include "cli_support.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>

#include "roomlab/audio.h"

namespace roomlab::cli {

void SetupLogging() {
  auto logger = spdlog::stderr_logger_mt("roomlab");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROOMLAB_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept real names.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown ROOMLAB_LOG level '{}'", env);
    }
  }
}

JobConfig::JobConfig(CLI::App* app) : app_(app) {
  app_->add_option("--config", config_path_,
                   "JSON file of parameter values; flags override it")
      ->check(CLI::ExistingFile);
}

void JobConfig::Register(CLI::Option* opt,
                         std::function<void(const Json&)> assign) {
  std::string key = opt->get_single_name();
  std::replace(key.begin(), key.end(), '-', '_');
  bindings_[key] = Binding{opt, std::move(assign)};
}

CLI::Option* JobConfig::Flag(const std::string& flag, bool& var,
                             const std::string& help) {
  CLI::Option* opt = app_->add_flag(flag, var, help);
  Register(opt, [&var](const Json& j) { var = j.get<bool>(); });
  return opt;
}

void JobConfig::Resolve() {
  if (config_path_.empty()) return;
  std::ifstream is(config_path_);
  if (!is) throw Error("cannot open config " + config_path_);
  try {
    file_ = Json::parse(is);
  } catch (const Json::exception& e) {
    throw Error("config " + config_path_ + ": " + e.what());
  }
  if (!file_.is_object()) throw Error("config " + config_path_ + ": expected an object");
  for (const auto& [key, value] : file_.items()) {
    auto it = bindings_.find(key);
    if (it == bindings_.end()) {
      if (std::find(extra_keys_.begin(), extra_keys_.end(), key) == extra_keys_.end())
        throw Error("config " + config_path_ + ": unknown key '" + key + "'");
      continue;
    }
    if (it->second.option->count() > 0) continue;  // the flag wins
    try {
      it->second.assign(value);
    } catch (const Json::exception& e) {
      throw Error("config " + config_path_ + ": bad value for '" + key +
                  "': " + e.what());
    }
  }
}

const Json* JobConfig::Extra(const std::string& key) const {
  auto it = file_.find(key);
  return it == file_.end() ? nullptr : &*it;
}

int DefaultWorkers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

std::vector<fs::path> ExpandWavInputs(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const std::string& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (e.is_regular_file() && ext == ".wav") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

fs::path ResolvePath(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

std::string RowId(const Json& row, std::size_t index) {
  if (row.contains("id")) {
    const Json& id = row["id"];
    return id.is_string() ? id.get<std::string>() : id.dump();
  }
  std::ostringstream os;
  os << "row" << std::setw(6) << std::setfill('0') << index;
  return os.str();
}

void CheckOutputName(const std::string& name) {
  if (name.empty() || name == "." || name == ".." ||
      name.find_first_of("/\\") != std::string::npos) {
    throw Error("id '" + name + "' cannot be used as an output file name");
  }
}

void WriteFileAtomic(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::uint64_t RequireSeed(const std::optional<std::uint64_t>& seed) {
  if (!seed) throw Error("--seed is required for this command (flag or config)");
  return *seed;
}

}  // namespace roomlab::cli
