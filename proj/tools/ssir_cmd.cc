// tools/ssir_cmd.cc

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
#include <sstream>

#include <spdlog/spdlog.h>

#include "commands.h"
#include "roomlab/manifest.h"
#include "roomlab/ssir.h"
#include "roomlab/wav.h"

namespace roomlab::cli {

namespace {

struct GenJob {
  std::string model = "ssir";
  double a = 1.0;
  std::optional<double> t_i;
  std::optional<double> t_d;
  std::optional<double> total_t;
  double lambda = kDefaultEventRate;
  std::optional<double> volume;
  std::string spikes = "sign";
  std::optional<std::uint64_t> seed;
  int sample_rate = kPipelineSampleRate;
  std::string out;
};

struct FitJob {
  std::vector<std::string> inputs;
  std::string model = "both";
  std::optional<double> volume;
  double lambda = kDefaultEventRate;
  std::string out;
};

struct CompareJob {
  std::vector<std::string> inputs;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  double lambda = kDefaultEventRate;
  double default_volume = 200.0;
  std::string weights;
  std::string out_dir;
};

double Need(const std::optional<double>& v, const char* flag) {
  if (!v) throw Error(std::string(flag) + " is required for this model");
  return *v;
}

fs::path SidecarPath(const fs::path& wav) {
  fs::path p = wav;
  p.replace_extension(".json");
  return p;
}

int RunGen(const GenJob& job) {
  const std::uint64_t seed = RequireSeed(job.seed);
  if (job.out.empty()) throw Error("--out is required");
  const double total_t = Need(job.total_t, "--total-t");
  Json meta = Json::object();
  meta["model"] = job.model;
  meta["seed"] = seed;
  meta["sample_rate"] = job.sample_rate;
  meta["a"] = job.a;
  std::optional<Rir> h;
  if (job.model == "schroeder") {
    meta["t60"] = Need(job.t_d, "--t-d");
    meta["total_t"] = total_t;
    h = GenerateSchroeder(job.a, *job.t_d, total_t, seed, job.sample_rate);
  } else if (job.model == "extended") {
    const ExtendedParams p{job.a, Need(job.t_i, "--t-i"), Need(job.t_d, "--t-d"),
                           total_t};
    meta["t_h"] = p.t_h;
    meta["t_t"] = p.t_t;
    meta["total_t"] = p.total_t;
    h = GenerateExtended(p, seed, job.sample_rate);
  } else if (job.model == "ssir") {
    SsirParams p;
    p.a = job.a;
    p.t_i = Need(job.t_i, "--t-i");
    p.t_d = Need(job.t_d, "--t-d");
    p.total_t = total_t;
    p.lambda = job.lambda;
    p.volume = Need(job.volume, "--volume");
    p.spikes = job.spikes == "gaussian" ? SpikeAmplitude::kGaussian
                                        : SpikeAmplitude::kRandomSign;
    const SsirRealization r = RealizeSsir(p, seed, job.sample_rate);
    meta["t_i"] = p.t_i;
    meta["t_d"] = p.t_d;
    meta["total_t"] = p.total_t;
    meta["lambda"] = p.lambda;
    meta["volume"] = *p.volume;
    meta["spikes"] = job.spikes;
    meta["onset_events"] = r.onset_events.size();
    meta["onset_attempts"] = r.attempts;
    h = r.rir;
  } else {
    throw Error("unknown model '" + job.model + "'");
  }
  std::ostringstream wav;
  WriteWav(wav, h->clip());
  WriteFileAtomic(job.out, wav.str());
  WriteFileAtomic(SidecarPath(job.out), meta.dump(2) + "\n");
  spdlog::info("wrote {} ({} samples)", job.out, h->size());
  return kExitOk;
}

Json SsirJson(const SsirParams& p) {
  Json j = Json::object();
  j["a"] = p.a;
  j["t_i"] = p.t_i;
  j["t_d"] = p.t_d;
  j["total_t"] = p.total_t;
  j["lambda"] = p.lambda;
  j["volume"] = p.volume ? Json(*p.volume) : Json(nullptr);
  return j;
}

Json ExtendedJson(const ExtendedParams& p) {
  Json j = Json::object();
  j["a"] = p.a;
  j["t_h"] = p.t_h;
  j["t_t"] = p.t_t;
  j["total_t"] = p.total_t;
  return j;
}

int RunFit(const FitJob& job) {
  if (job.model != "ssir" && job.model != "extended" && job.model != "both")
    throw Error("--model must be ssir, extended or both");
  const auto files = ExpandWavInputs(job.inputs);
  if (files.empty()) throw Error("fit: no input files");
  std::vector<Json> records;
  std::size_t failures = 0;
  for (const fs::path& f : files) {
    Json rec = Json::object();
    rec["file"] = f.string();
    try {
      const Rir h(ReadWav(f), job.volume);
      if (job.model != "extended") rec["ssir"] = SsirJson(FitSsir(h, job.lambda));
      if (job.model != "ssir") rec["extended"] = ExtendedJson(FitExtended(h));
    } catch (const Error& e) {
      rec["error"] = e.what();
      spdlog::warn("{}: {}", f.string(), e.what());
      ++failures;
    }
    records.push_back(std::move(rec));
  }
  const std::string text = JsonLines(records);
  if (job.out.empty()) {
    std::cout << text << std::flush;
  } else {
    WriteFileAtomic(job.out, text);
  }
  return failures == 0 ? kExitOk : kExitItemFailures;
}

int RunCompare(const CompareJob& job) {
  const std::uint64_t seed = RequireSeed(job.seed);
  if (job.out_dir.empty()) throw Error("--out-dir is required");
  if (!job.manifest.empty() && !job.inputs.empty())
    throw Error("give either --manifest or input files, not both");

  struct Item {
    std::string name;
    fs::path path;
    std::optional<double> volume;
  };
  std::vector<Item> items;
  if (!job.manifest.empty()) {
    const fs::path base = fs::path(job.manifest).parent_path();
    const auto rows = ReadJsonLines(fs::path(job.manifest));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (!r.contains("rir_path")) throw Error("manifest row " + std::to_string(i) +
                                               " lacks rir_path");
      std::optional<double> volume;
      if (r.contains("volume")) volume = r["volume"].get<double>();
      items.push_back({RowId(r, i), ResolvePath(base, r["rir_path"].get<std::string>()),
                       volume});
    }
  } else {
    for (const fs::path& p : ExpandWavInputs(job.inputs))
      items.push_back({p.string(), p, std::nullopt});
  }

  ModelComparison cmp;
  std::vector<ComparisonInput> inputs;
  for (const Item& it : items) {
    try {
      inputs.push_back({it.name, Rir(ReadWav(it.path), it.volume)});
    } catch (const Error& e) {
      cmp.skipped.emplace_back(it.name, e.what());
    }
  }
  CompareOptions opt;
  opt.seed = seed;
  opt.lambda = job.lambda;
  opt.default_volume = job.default_volume;
  if (!job.weights.empty()) opt.analyze.weights = BandWeights::FromJsonFile(job.weights);
  auto skipped_unreadable = std::move(cmp.skipped);
  cmp = CompareModels(inputs, opt);
  skipped_unreadable.insert(skipped_unreadable.end(), cmp.skipped.begin(),
                            cmp.skipped.end());
  cmp.skipped = std::move(skipped_unreadable);

  fs::create_directories(job.out_dir);
  std::ostringstream csv;
  WriteComparisonCsv(csv, cmp);
  WriteFileAtomic(fs::path(job.out_dir) / "comparison.csv", csv.str());

  Json report = Json::object();
  report["seed"] = seed;
  report["num_rirs"] = cmp.num_rirs;
  Json mae = Json::object();
  for (auto [model, values] : {std::pair{"extended", &cmp.extended_mae},
                               std::pair{"ssir", &cmp.ssir_mae}}) {
    Json row = Json::object();
    for (std::size_t k = 0; k < kRapNames.size(); ++k)
      row[kRapNames[k]] = cmp.num_rirs ? Json((*values)[k]) : Json(nullptr);
    mae[model] = row;
  }
  report["mae"] = mae;
  Json skipped = Json::array();
  for (const auto& [name, reason] : cmp.skipped) {
    skipped.push_back({{"name", name}, {"reason", reason}});
    spdlog::warn("skipped {}: {}", name, reason);
  }
  report["skipped"] = skipped;
  WriteFileAtomic(fs::path(job.out_dir) / "comparison.json", report.dump(2) + "\n");
  spdlog::info("compared {} RIRs, skipped {}", cmp.num_rirs, cmp.skipped.size());
  return cmp.skipped.empty() ? kExitOk : kExitItemFailures;
}

}  // namespace

void AddSsirCommand(CLI::App& app, int* exit_code) {
  auto* ssir = app.add_subcommand("ssir", "Stochastic RIR models");
  ssir->require_subcommand(1);

  {
    auto* sub = ssir->add_subcommand("gen", "Generate one RIR (WAV plus params JSON)");
    auto job = std::make_shared<GenJob>();
    auto cfg = std::make_shared<JobConfig>(sub);
    cfg->Add("--model", job->model, "ssir, extended or schroeder")
        ->check(CLI::IsMember({"ssir", "extended", "schroeder"}));
    cfg->Add("--a", job->a, "Envelope peak gain");
    cfg->Add("--t-i", job->t_i, "Onset duration in s (T_h for the extended model)");
    cfg->Add("--t-d", job->t_d, "Decay constant in s (T60 for schroeder)");
    cfg->Add("--total-t", job->total_t, "Length in s");
    cfg->Add("--lambda", job->lambda, "Onset event-rate coefficient");
    cfg->Add("--volume", job->volume, "Room volume in m^3 (ssir)");
    cfg->Add("--spikes", job->spikes, "Onset amplitudes: sign or gaussian")
        ->check(CLI::IsMember({"sign", "gaussian"}));
    cfg->Add("--seed", job->seed, "Random seed (required)");
    cfg->Add("--sample-rate", job->sample_rate, "Hz")->check(CLI::PositiveNumber);
    cfg->Add("--out", job->out, "Output WAV; parameters go next to it as .json");
    sub->callback([job, cfg, exit_code] {
      *exit_code = Guarded([&] {
        cfg->Resolve();
        return RunGen(*job);
      });
    });
  }
  {
    auto* sub = ssir->add_subcommand("fit", "Fit model parameters to RIRs");
    auto job = std::make_shared<FitJob>();
    auto cfg = std::make_shared<JobConfig>(sub);
    sub->add_option("inputs", job->inputs, "RIR WAV files or folders")->required();
    cfg->Add("--model", job->model, "ssir, extended or both")
        ->check(CLI::IsMember({"ssir", "extended", "both"}));
    cfg->Add("--volume", job->volume, "Room volume in m^3, copied into the fit");
    cfg->Add("--lambda", job->lambda, "Onset event-rate coefficient");
    cfg->Add("--out", job->out, "Write JSON-lines here instead of stdout");
    sub->callback([job, cfg, exit_code] {
      *exit_code = Guarded([&] {
        cfg->Resolve();
        return RunFit(*job);
      });
    });
  }
  {
    auto* sub = ssir->add_subcommand(
        "compare", "Fit both models to each RIR, regenerate and report RAP MAEs");
    auto job = std::make_shared<CompareJob>();
    auto cfg = std::make_shared<JobConfig>(sub);
    sub->add_option("inputs", job->inputs, "RIR WAV files or folders");
    cfg->Add("--manifest", job->manifest, "JSON-lines rows {id, rir_path, volume}");
    cfg->Add("--seed", job->seed, "Random seed (required)");
    cfg->Add("--lambda", job->lambda, "Onset event-rate coefficient");
    cfg->Add("--default-volume", job->default_volume,
             "Volume for RIRs without one, in m^3");
    cfg->Add("--weights", job->weights, "STI octave-band weights (JSON)");
    cfg->Add("--out-dir", job->out_dir, "Where comparison.csv/.json are written");
    sub->callback([job, cfg, exit_code] {
      *exit_code = Guarded([&] {
        cfg->Resolve();
        return RunCompare(*job);
      });
    });
  }
}

}  // namespace roomlab::cli
