// tools/synth_cmd.cc

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

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "commands.h"
#include "roomlab/manifest.h"
#include "roomlab/random.h"
#include "roomlab/signal.h"
#include "roomlab/synth.h"
#include "roomlab/wav.h"

namespace roomlab::cli {

namespace {

constexpr const char* kOccupancyKeys[] = {
    "gamma_shape",  "gamma_scale_cm",  "d0",
    "d_max",        "n_max",           "volume_caps",
    "frame_s",      "clip_s",          "cap_enforce_probability",
    "frame_activity", "early_cutoff_ms", "level_pmf"};

struct SynthJob {
  std::string manifest;
  std::string out_dir;
  std::string speech_pool;
  std::string noise_pool;
  std::string rebalance;
  std::string snr_grid;
  std::optional<std::uint64_t> seed;
  int workers = DefaultWorkers();
  bool force = false;
};

struct PoolEntry {
  fs::path path;
  std::vector<VadSegment> vad;
  bool has_vad = false;
};

std::vector<double> ParseSnrGrid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    try {
      grid.push_back(SnrFromJson(Json::parse(tok)));
    } catch (const Json::exception&) {
      grid.push_back(SnrFromJson(Json(tok)));
    }
  }
  if (grid.empty()) throw Error("empty SNR grid");
  return grid;
}

std::string SnrGridFromJson(const Json& j) {
  if (!j.is_array()) throw Error("snr_grid must be an array");
  std::string out;
  for (const Json& v : j) {
    if (!out.empty()) out += ',';
    out += std::isinf(SnrFromJson(v)) ? "Inf" : v.dump();
  }
  return out;
}

std::vector<VadSegment> ParseVad(const Json& j) {
  std::vector<VadSegment> vad;
  for (const Json& seg : j) {
    if (!seg.is_array() || seg.size() != 2)
      throw Error("VAD segments must be [start_s, end_s] pairs");
    vad.push_back({seg[0].get<double>(), seg[1].get<double>()});
  }
  return vad;
}

std::vector<PoolEntry> ReadPool(const std::string& file, const char* path_key) {
  std::vector<PoolEntry> pool;
  if (file.empty()) return pool;
  const fs::path base = fs::path(file).parent_path();
  for (const auto& row : ReadJsonLines(fs::path(file))) {
    PoolEntry e;
    const char* key = row.contains(path_key) ? path_key : "path";
    if (!row.contains(key)) throw Error(file + ": pool entry lacks '" + path_key + "'");
    e.path = ResolvePath(base, row[key].get<std::string>());
    if (row.contains("vad")) {
      e.vad = ParseVad(row["vad"]);
      e.has_vad = true;
    }
    pool.push_back(std::move(e));
  }
  return pool;
}

std::size_t PickIndex(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double PickSnr(Rng& rng, const Json& row, const std::vector<double>& grid) {
  if (row.contains("snr_db")) return SnrFromJson(row["snr_db"]);
  return grid[PickIndex(rng, grid.size())];
}

// Path from the row, else a draw from the pool.
fs::path RowOrPool(Rng& rng, const Json& row, const char* key, const fs::path& base,
                   const std::vector<PoolEntry>& pool, const char* pool_flag) {
  if (row.contains(key)) return ResolvePath(base, row[key].get<std::string>());
  if (pool.empty())
    throw Error(std::string("row has no ") + key + " and " + pool_flag + " is not set");
  return pool[PickIndex(rng, pool.size())].path;
}

std::optional<double> OptionalNumber(const Json& row, const char* key) {
  if (!row.contains(key) || row[key].is_null()) return std::nullopt;
  return row[key].get<double>();
}

Json OrNull(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string WavBytes(const AudioClip& clip) {
  std::ostringstream os;
  WriteWav(os, clip);
  return os.str();
}

// Per-row body: returns the label record and fills *clip with the audio.
using RowFn = std::function<Json(const Json& row, std::size_t index, Rng& rng,
                                 std::optional<AudioClip>* clip)>;

int RunRows(const SynthJob& job, const RowFn& fn) {
  const std::uint64_t seed = RequireSeed(job.seed);
  if (job.manifest.empty()) throw Error("--manifest is required");
  if (job.out_dir.empty()) throw Error("--out-dir is required");
  const fs::path out_dir(job.out_dir);
  std::vector<ManifestRow> rows = ReadJsonLines(fs::path(job.manifest));
  fs::create_directories(out_dir);

  if (!job.rebalance.empty()) {
    std::ifstream is(job.rebalance);
    if (!is) throw Error("cannot open " + job.rebalance);
    nlohmann::json target_json;
    try {
      target_json = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw Error(job.rebalance + ": " + e.what());
    }
    const std::string field = target_json.value("field", "");
    const auto edges = target_json.value("edges", std::vector<double>{});
    std::size_t in_range = 0;
    for (const auto& r : rows) {
      if (!edges.empty() && r.contains(field) && r[field].is_number()) {
        const double v = r[field].get<double>();
        in_range += v >= edges.front() && v <= edges.back();
      }
    }
    const HistogramTarget target = HistogramTarget::FromJson(target_json, in_range);
    RebalanceResult rb = RebalanceManifest(rows, target, seed);
    for (std::size_t b : rb.unreachable_bins)
      spdlog::warn("rebalance: bin {} has a positive target but no rows", b);
    spdlog::info("rebalance: dropped {}, duplicated {}", rb.dropped, rb.duplicated);
    rows = std::move(rb.rows);
    WriteFileAtomic(out_dir / "manifest.rebalanced.jsonl", JsonLines(rows));
  }

  std::vector<std::string> ids(rows.size());
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ids[i] = RowId(rows[i], i);
      CheckOutputName(ids[i]);
      if (!seen.emplace(ids[i], i).second)
        throw Error("duplicate row id '" + ids[i] + "'");
    }
  }

  std::vector<Json> records(rows.size());
  std::vector<char> ok(rows.size(), 0), reused(rows.size(), 0);
  ParallelFor(rows.size(), job.workers, [&](std::size_t i) {
    const fs::path wav = out_dir / (ids[i] + ".wav");
    const fs::path side = out_dir / (ids[i] + ".json");
    try {
      if (!job.force && fs::exists(wav) && fs::exists(side)) {
        std::ifstream is(side);
        records[i] = Json::parse(is);
        ok[i] = reused[i] = 1;
        return;
      }
      Rng rng = MakeRng(seed, i);
      std::optional<AudioClip> clip;
      Json rec = Json::object();
      rec["id"] = ids[i];
      rec["wav"] = wav.filename().string();
      rec.update(fn(rows[i], i, rng, &clip));
      rec["seed"] = seed;
      rec["row"] = i;
      WriteFileAtomic(wav, WavBytes(*clip));
      WriteFileAtomic(side, rec.dump(2) + "\n");
      records[i] = std::move(rec);
      ok[i] = 1;
    } catch (const std::exception& e) {
      records[i] = Json{{"id", ids[i]}, {"row", i}, {"error", e.what()}};
    }
  });

  std::vector<Json> labels, failures;
  std::size_t num_reused = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (ok[i]) {
      labels.push_back(records[i]);
      num_reused += reused[i];
    } else {
      spdlog::warn("row {} ({}): {}", i, ids[i], records[i]["error"].get<std::string>());
      failures.push_back(records[i]);
    }
  }
  WriteFileAtomic(out_dir / "labels.jsonl", JsonLines(labels));
  const fs::path failure_file = out_dir / "failures.jsonl";
  if (failures.empty()) {
    fs::remove(failure_file);
  } else {
    WriteFileAtomic(failure_file, JsonLines(failures));
  }
  spdlog::info("{} rows: {} written, {} reused, {} failed", rows.size(),
               labels.size() - num_reused, num_reused, failures.size());
  return failures.empty() ? kExitOk : kExitItemFailures;
}

int RunUnified(const SynthJob& job) {
  const fs::path base = fs::path(job.manifest).parent_path();
  const auto grid = ParseSnrGrid(job.snr_grid.empty() ? "0,5,10,15,20,Inf" : job.snr_grid);
  const auto speech_pool = ReadPool(job.speech_pool, "speech_path");
  const auto noise_pool = ReadPool(job.noise_pool, "noise_path");
  AudioCache cache;
  return RunRows(job, [&](const Json& row, std::size_t, Rng& rng,
                          std::optional<AudioClip>* clip) {
    if (!row.contains("rir_path")) throw Error("row lacks rir_path");
    const fs::path speech_path =
        RowOrPool(rng, row, "speech_path", base, speech_pool, "--speech-pool");
    const fs::path noise_path =
        RowOrPool(rng, row, "noise_path", base, noise_pool, "--noise-pool");
    const double snr = PickSnr(rng, row, grid);
    const fs::path rir_path = ResolvePath(base, row["rir_path"].get<std::string>());
    const Rir rir(*cache.Get(rir_path), OptionalNumber(row, "volume"),
                  OptionalNumber(row, "source_distance"));
    UnifiedExample ex =
        SynthUnified(*cache.Get(speech_path), rir, *cache.Get(noise_path), snr);
    Json rec = Json::object();
    rec["speech_path"] = speech_path.string();
    rec["rir_path"] = rir_path.string();
    rec["noise_path"] = noise_path.string();
    rec["snr_db"] = SnrToJson(snr);
    rec.update(RapJson(ex.labels));
    rec["volume"] = OrNull(ex.volume);
    rec["source_distance"] = OrNull(ex.source_distance);
    clip->emplace(std::move(ex.clip));
    return rec;
  });
}

OccupancyConfig OccupancyFromConfig(const JobConfig& cfg) {
  OccupancyConfig oc;
  auto num = [&](const char* key, double& field) {
    if (const Json* j = cfg.Extra(key)) field = j->get<double>();
  };
  num("gamma_shape", oc.gamma_shape);
  num("gamma_scale_cm", oc.gamma_scale_cm);
  num("d0", oc.d0);
  num("d_max", oc.d_max);
  num("frame_s", oc.frame_s);
  num("clip_s", oc.clip_s);
  num("cap_enforce_probability", oc.cap_enforce_probability);
  num("frame_activity", oc.frame_activity);
  num("early_cutoff_ms", oc.early_cutoff_ms);
  if (const Json* j = cfg.Extra("n_max")) oc.n_max = j->get<int>();
  if (const Json* j = cfg.Extra("volume_caps")) {
    oc.volume_caps.clear();
    for (const Json& c : *j) {
      if (!c.is_array() || c.size() != 2)
        throw Error("volume_caps entries must be [max_volume, max_occupancy]");
      const double v = c[0].is_number() ? c[0].get<double>()
                                        : std::numeric_limits<double>::infinity();
      oc.volume_caps.push_back({v, c[1].get<int>()});
    }
  } else {
    // The default table tops out at 17; a smaller n_max caps it.
    for (VolumeCap& c : oc.volume_caps) c.max_occupancy = std::min(c.max_occupancy, oc.n_max);
  }
  oc.Validate();
  return oc;
}

int RunOccupancy(const SynthJob& job, const JobConfig& cfg) {
  const fs::path base = fs::path(job.manifest).parent_path();
  OccupancyConfig oc = OccupancyFromConfig(cfg);
  if (!job.snr_grid.empty()) oc.snr_grid = ParseSnrGrid(job.snr_grid);
  std::vector<double> pmf = GeometricLevelPmf(oc.n_max);
  if (const Json* j = cfg.Extra("level_pmf")) pmf = j->get<std::vector<double>>();
  const auto speech_pool = ReadPool(job.speech_pool, "speech_path");
  const auto noise_pool = ReadPool(job.noise_pool, "noise_path");
  if (speech_pool.empty()) throw Error("--speech-pool is required for occupancy");
  for (const PoolEntry& e : speech_pool) {
    if (!e.has_vad)
      throw Error("speech pool entry " + e.path.string() + " has no vad segments");
  }
  AudioCache cache;
  return RunRows(job, [&](const Json& row, std::size_t, Rng& rng,
                          std::optional<AudioClip>* clip) {
    if (!row.contains("rir_path")) throw Error("row lacks rir_path");
    const std::optional<double> volume = OptionalNumber(row, "volume");
    const int cap = volume ? oc.CapFor(*volume) : oc.n_max;
    int n;
    if (row.contains("num_talkers")) {
      n = row["num_talkers"].get<int>();
      if (n < 0 || n > oc.n_max) throw Error("num_talkers outside [0, n_max]");
    } else {
      if (!volume) throw Error("row needs a volume to draw its occupancy level");
      n = SampleOccupancy(rng, *volume, oc, pmf);
    }
    // Distinct talkers while the pool allows it.
    std::vector<std::size_t> chosen;
    if (speech_pool.size() >= static_cast<std::size_t>(n)) {
      std::vector<std::size_t> idx(speech_pool.size());
      std::iota(idx.begin(), idx.end(), 0);
      for (int k = 0; k < n; ++k) {
        const std::size_t j =
            k + PickIndex(rng, idx.size() - static_cast<std::size_t>(k));
        std::swap(idx[k], idx[j]);
        chosen.push_back(idx[k]);
      }
    } else {
      for (int k = 0; k < n; ++k) chosen.push_back(PickIndex(rng, speech_pool.size()));
    }
    const fs::path noise_path =
        RowOrPool(rng, row, "noise_path", base, noise_pool, "--noise-pool");
    const double snr = PickSnr(rng, row, oc.snr_grid);
    const fs::path rir_path = ResolvePath(base, row["rir_path"].get<std::string>());
    const Rir rir(*cache.Get(rir_path), volume);

    std::vector<Talker> talkers;
    Json speech_paths = Json::array();
    for (std::size_t k : chosen) {
      talkers.push_back({*cache.Get(speech_pool[k].path), speech_pool[k].vad});
      speech_paths.push_back(speech_pool[k].path.string());
    }
    OccupancyExample ex =
        SynthOccupancy(talkers, rir, *cache.Get(noise_path), snr, oc, rng);
    Json rec = Json::object();
    rec["rir_path"] = rir_path.string();
    rec["noise_path"] = noise_path.string();
    rec["volume"] = OrNull(volume);
    rec["snr_db"] = SnrToJson(snr);
    rec["num_talkers"] = n;
    rec["cap"] = cap;
    rec["cap_exceeded"] = n > cap;
    rec["timeline"] = ex.timeline;
    rec["distances_m"] = ex.distances_m;
    rec["offsets_s"] = ex.offsets_s;
    rec["speech_paths"] = speech_paths;
    clip->emplace(std::move(ex.clip));
    return rec;
  });
}

void AddSynthFlags(JobConfig& cfg, CLI::App* sub, SynthJob& job) {
  cfg.Add("--manifest", job.manifest, "JSON-lines manifest, one example per row");
  cfg.Add("--out-dir", job.out_dir, "Output folder");
  cfg.Add("--seed", job.seed, "Random seed (required)");
  cfg.Add("--workers", job.workers, "Parallel workers")->check(CLI::PositiveNumber);
  cfg.Flag("--force", job.force, "Regenerate rows whose outputs already exist");
  cfg.Add("--speech-pool", job.speech_pool,
          "JSON-lines {speech_path, vad} drawn from when a row names no speech");
  cfg.Add("--noise-pool", job.noise_pool,
          "JSON-lines {noise_path} drawn from when a row names no noise");
  cfg.Add("--rebalance", job.rebalance,
          "Target histogram JSON {field, edges, counts|proportions}");
  cfg.AddWith("--snr-grid", job.snr_grid,
              "Comma-separated SNRs in dB (Inf for none) for rows without snr_db",
              [&job](const Json& j) { job.snr_grid = SnrGridFromJson(j); });
  (void)sub;
}

}  // namespace

void AddSynthCommand(CLI::App& app, int* exit_code) {
  auto* synth = app.add_subcommand("synth", "Training-corpus synthesis");
  synth->require_subcommand(1);
  {
    auto* sub = synth->add_subcommand(
        "unified", "Noisy reverberant speech labelled with the RIR's parameters");
    auto job = std::make_shared<SynthJob>();
    auto cfg = std::make_shared<JobConfig>(sub);
    AddSynthFlags(*cfg, sub, *job);
    sub->callback([job, cfg, exit_code] {
      *exit_code = Guarded([&] {
        cfg->Resolve();
        return RunUnified(*job);
      });
    });
  }
  {
    auto* sub = synth->add_subcommand(
        "occupancy", "Multitalker reverberant speech with per-frame talker counts");
    auto job = std::make_shared<SynthJob>();
    auto cfg = std::make_shared<JobConfig>(sub);
    AddSynthFlags(*cfg, sub, *job);
    for (const char* key : kOccupancyKeys) cfg->AllowKey(key);
    sub->callback([job, cfg, exit_code] {
      *exit_code = Guarded([&] {
        cfg->Resolve();
        return RunOccupancy(*job, *cfg);
      });
    });
  }
}

}  // namespace roomlab::cli
