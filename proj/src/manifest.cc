// src/manifest.cc

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

#include "roomlab/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "roomlab/audio.h"
#include "roomlab/random.h"

namespace roomlab {

std::vector<ManifestRow> ReadJsonLines(std::istream& is) {
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(ManifestRow::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rows.back().is_object())
      throw Error("manifest line " + std::to_string(line_no) +
                  ": expected a JSON object");
  }
  return rows;
}

std::vector<ManifestRow> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open manifest " + path.string());
  try {
    return ReadJsonLines(is);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void WriteJsonLines(std::ostream& os, const std::vector<ManifestRow>& rows) {
  for (const auto& r : rows) os << r.dump() << '\n';
}

double SnrFromJson(const ManifestRow& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  }
  throw Error("SNR must be a number or \"Inf\", got " + v.dump());
}

ManifestRow SnrToJson(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return "Inf";
  return snr_db;
}

void HistogramTarget::Validate() const {
  if (field.empty()) throw Error("HistogramTarget: missing field");
  if (edges.size() < 2) throw Error("HistogramTarget: need at least two edges");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error("HistogramTarget: edges must be strictly increasing");
  if (counts.size() != edges.size() - 1)
    throw Error("HistogramTarget: one count per bin required");
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error("HistogramTarget: counts must be non-negative");
  }
}

HistogramTarget HistogramTarget::FromJson(const nlohmann::json& j,
                                          std::size_t rows_in_range) {
  HistogramTarget t;
  try {
    t.field = j.at("field").get<std::string>();
    t.edges = j.at("edges").get<std::vector<double>>();
    if (j.contains("counts")) {
      t.counts = j.at("counts").get<std::vector<double>>();
    } else {
      const auto p = j.at("proportions").get<std::vector<double>>();
      const double total = j.contains("total") ? j.at("total").get<double>()
                                               : static_cast<double>(rows_in_range);
      const double mass = std::accumulate(p.begin(), p.end(), 0.0);
      if (!(mass > 0.0)) throw Error("HistogramTarget: proportions sum to 0");
      for (double v : p) t.counts.push_back(total * v / mass);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("HistogramTarget: ") + e.what());
  }
  t.Validate();
  return t;
}

namespace {

// Bin index of v, or -1 when outside the edges.
long BinOf(const std::vector<double>& edges, double v) {
  if (!(v >= edges.front() && v <= edges.back())) return -1;
  auto it = std::upper_bound(edges.begin(), edges.end(), v);
  long bin = static_cast<long>(it - edges.begin()) - 1;
  return std::min<long>(bin, static_cast<long>(edges.size()) - 2);
}

}  // namespace

RebalanceResult RebalanceManifest(const std::vector<ManifestRow>& rows,
                                  const HistogramTarget& target,
                                  std::uint64_t seed) {
  target.Validate();
  const std::size_t num_bins = target.counts.size();
  std::vector<std::vector<std::size_t>> members(num_bins);
  std::vector<long> bin_of(rows.size(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.contains(target.field) || !r[target.field].is_number()) {
      throw Error("RebalanceManifest: row " + std::to_string(i) +
                  " lacks numeric field '" + target.field + "'");
    }
    bin_of[i] = BinOf(target.edges, r[target.field].get<double>());
    if (bin_of[i] >= 0) members[bin_of[i]].push_back(i);
  }

  RebalanceResult out;
  // copies[i]: how many times row i appears in the output (0 = dropped).
  std::vector<std::size_t> copies(rows.size(), 1);
  Rng rng = MakeRng(seed, 0);
  for (std::size_t b = 0; b < num_bins; ++b) {
    const auto want = static_cast<std::size_t>(std::llround(target.counts[b]));
    auto& idx = members[b];
    const std::size_t have = idx.size();
    if (have == 0) {
      if (want > 0) out.unreachable_bins.push_back(b);
      continue;
    }
    if (want == have) continue;
    std::vector<std::size_t> shuffled = idx;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (want < have) {
      for (std::size_t k = want; k < have; ++k) copies[shuffled[k]] = 0;
      out.dropped += have - want;
    } else {
      for (std::size_t i : idx) copies[i] = want / have;
      for (std::size_t k = 0; k < want % have; ++k) ++copies[shuffled[k]];
      out.duplicated += want - have;
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < copies[i]; ++c) {
      ManifestRow row = rows[i];
      if (c > 0) {
        row["dup_index"] = c;
        if (row.contains("id")) {
          const auto& id = row["id"];
          row["id"] = (id.is_string() ? id.get<std::string>() : id.dump()) +
                      "_dup" + std::to_string(c);
        }
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace roomlab
