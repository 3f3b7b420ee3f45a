// tools/analyze_cmd.cc

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

#include <iostream>

#include <spdlog/spdlog.h>

#include "commands.h"
#include "roomlab/wav.h"

namespace roomlab::cli {

namespace {

struct AnalyzeJob {
  std::vector<std::string> inputs;
  std::string out;
  std::string weights;
  bool partial = false;
  int workers = DefaultWorkers();
};

Json AnalyzeOne(const fs::path& file, const AnalyzeOptions& options,
                bool partial, bool* failed) {
  Json rec = Json::object();
  rec["file"] = file.string();
  try {
    const Rir h(ReadWav(file));
    if (!partial) {
      rec.update(RapJson(Analyze(h, options)));
      return rec;
    }
    const PartialRapSet p = AnalyzePartial(h, options);
    const std::optional<double>* slots[] = {&p.sti, &p.alcons, &p.t60, &p.edt,
                                            &p.c80, &p.c50,    &p.d50, &p.ts};
    for (std::size_t k = 0; k < kRapNames.size(); ++k) {
      rec[kRapNames[k]] = *slots[k] ? Json(**slots[k]) : Json(nullptr);
    }
    if (!p.failures.empty()) {
      rec["failures"] = p.failures;
      *failed = true;
    }
  } catch (const Error& e) {
    rec["error"] = e.what();
    *failed = true;
  }
  return rec;
}

int Run(const AnalyzeJob& job) {
  const auto files = ExpandWavInputs(job.inputs);
  if (files.empty()) throw Error("analyze: no input files");
  AnalyzeOptions options;
  if (!job.weights.empty()) options.weights = BandWeights::FromJsonFile(job.weights);

  std::vector<Json> records(files.size());
  std::vector<char> failed(files.size(), 0);
  ParallelFor(files.size(), job.workers, [&](std::size_t i) {
    bool f = false;
    records[i] = AnalyzeOne(files[i], options, job.partial, &f);
    failed[i] = f;
  });

  std::size_t failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!failed[i]) continue;
    ++failures;
    spdlog::warn("{}: {}", files[i].string(),
                 records[i].contains("error") ? records[i]["error"].dump()
                                              : records[i]["failures"].dump());
  }
  const std::string text = JsonLines(records);
  if (job.out.empty()) {
    std::cout << text << std::flush;
  } else {
    WriteFileAtomic(job.out, text);
  }
  spdlog::info("analyzed {} files, {} failed", files.size(), failures);
  return failures == 0 ? kExitOk : kExitItemFailures;
}

}  // namespace

void AddAnalyzeCommand(CLI::App& app, int* exit_code) {
  auto* sub = app.add_subcommand(
      "analyze", "Compute STI, %ALcons, T60, EDT, C80, C50, D50 and Ts of RIRs");
  auto job = std::make_shared<AnalyzeJob>();
  auto cfg = std::make_shared<JobConfig>(sub);
  sub->add_option("inputs", job->inputs, "RIR WAV files or folders of them")
      ->required();
  cfg->Add("--out", job->out, "Write JSON-lines here instead of stdout");
  cfg->Add("--weights", job->weights, "STI octave-band weights (JSON)");
  cfg->Flag("--partial", job->partial,
            "Report every metric that can be computed, with per-metric errors");
  cfg->Add("--workers", job->workers, "Parallel workers")->check(CLI::PositiveNumber);
  sub->callback([job, cfg, exit_code] {
    *exit_code = Guarded([&] {
      cfg->Resolve();
      return Run(*job);
    });
  });
}

}  // namespace roomlab::cli
