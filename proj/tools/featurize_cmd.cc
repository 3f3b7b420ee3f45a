// tools/featurize_cmd.cc

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

#include <spdlog/spdlog.h>

#include "commands.h"
#include "roomlab/featurizer.h"
#include "roomlab/manifest.h"
#include "roomlab/wav.h"

namespace roomlab::cli {

namespace {

struct FeaturizeJob {
  std::vector<std::string> inputs;
  std::string manifest;
  std::string kind;
  std::string out_dir;
  int workers = DefaultWorkers();
  bool force = false;
};

struct Item {
  std::string name;
  fs::path wav;
};

std::vector<Item> CollectItems(const FeaturizeJob& job) {
  std::vector<Item> items;
  if (!job.manifest.empty()) {
    const fs::path base = fs::path(job.manifest).parent_path();
    const auto rows = ReadJsonLines(fs::path(job.manifest));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const char* key = rows[i].contains("wav_path") ? "wav_path" : "path";
      if (!rows[i].contains(key))
        throw Error("manifest row " + std::to_string(i + 1) + " lacks wav_path");
      items.push_back({RowId(rows[i], i),
                       ResolvePath(base, rows[i][key].get<std::string>())});
    }
  } else {
    for (const fs::path& p : ExpandWavInputs(job.inputs))
      items.push_back({p.stem().string(), p});
  }
  std::map<std::string, std::size_t> seen;
  for (const Item& it : items) {
    CheckOutputName(it.name);
    if (++seen[it.name] > 1) throw Error("duplicate output name '" + it.name + "'");
  }
  return items;
}

int RunFeaturize(const FeaturizeJob& job) {
  if (job.manifest.empty() == job.inputs.empty())
    throw Error("give either input files or --manifest");
  if (job.out_dir.empty()) throw Error("--out-dir is required");
  const FeatureKind kind = ParseKind(job.kind);
  const auto items = CollectItems(job);
  const fs::path out_dir(job.out_dir);
  fs::create_directories(out_dir);

  std::vector<Json> records(items.size());
  std::vector<char> ok(items.size(), 0);
  ParallelFor(items.size(), job.workers, [&](std::size_t i) {
    const fs::path stem = out_dir / items[i].name;
    fs::path f32 = stem, side = stem;
    f32 += ".f32";
    side += ".json";
    Json rec = {{"name", items[i].name}, {"wav", items[i].wav.string()}};
    try {
      FeatureMatrix m;
      if (!job.force && fs::exists(f32) && fs::exists(side)) {
        m = ReadFeatures(stem);
        if (m.kind != kind)
          throw Error("existing " + side.string() + " holds " + KindName(m.kind) +
                      " features; use --force");
      } else {
        m = Featurize(ReadWav(items[i].wav), kind);
        WriteFeatures(stem, m);
      }
      rec["features"] = f32.filename().string();
      rec["kind"] = KindName(kind);
      rec["shape"] = {m.bins, m.frames};
      ok[i] = 1;
    } catch (const std::exception& e) {
      rec["error"] = e.what();
    }
    records[i] = std::move(rec);
  });

  std::vector<Json> index;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (ok[i]) {
      index.push_back(records[i]);
    } else {
      ++failed;
      spdlog::warn("{}: {}", items[i].wav.string(),
                   records[i]["error"].get<std::string>());
    }
  }
  WriteFileAtomic(out_dir / "features.jsonl", JsonLines(index));
  if (failed) {
    std::vector<Json> failures;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!ok[i]) failures.push_back(records[i]);
    WriteFileAtomic(out_dir / "failures.jsonl", JsonLines(failures));
  } else {
    fs::remove(out_dir / "failures.jsonl");
  }
  return failed ? kExitItemFailures : kExitOk;
}

}  // namespace

void AddFeaturizeCommand(CLI::App& app, int* exit_code) {
  auto* sub = app.add_subcommand("featurize", "Time-frequency features of WAV files");
  auto job = std::make_shared<FeaturizeJob>();
  auto cfg = std::make_shared<JobConfig>(sub);
  sub->add_option("inputs", job->inputs, "WAV files or folders of them");
  cfg->Add("--manifest", job->manifest, "JSON-lines rows {id, wav_path}");
  cfg->Add("--kind", job->kind, "spectrogram, mel, mfcc or gammatone")
      ->check(CLI::IsMember({"spectrogram", "mel", "mfcc", "gammatone"}));
  cfg->Add("--out-dir", job->out_dir, "Output folder");
  cfg->Add("--workers", job->workers, "Parallel workers")->check(CLI::PositiveNumber);
  cfg->Flag("--force", job->force, "Recompute existing outputs");
  sub->callback([job, cfg, exit_code] {
    *exit_code = Guarded([&] {
      cfg->Resolve();
      if (job->kind.empty()) throw Error("--kind is required");
      return RunFeaturize(*job);
    });
  });
}

}  // namespace roomlab::cli
