// include/roomlab/manifest.h

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

#ifndef ROOMLAB_MANIFEST_H_
#define ROOMLAB_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace roomlab {

using ManifestRow = nlohmann::ordered_json;

std::vector<ManifestRow> ReadJsonLines(std::istream& is);
std::vector<ManifestRow> ReadJsonLines(const std::filesystem::path& path);
void WriteJsonLines(std::ostream& os, const std::vector<ManifestRow>& rows);

/// SNR values in manifests: a number, or the string "Inf" for no noise.
double SnrFromJson(const ManifestRow& v);
ManifestRow SnrToJson(double snr_db);

/// Desired row count per bin of a numeric field; bin i is
/// [edges[i], edges[i + 1]), the last bin closed on the right.
struct HistogramTarget {
  std::string field;
  std::vector<double> edges;
  std::vector<double> counts;

  void Validate() const;
  /// {"field": ..., "edges": [...], "counts": [...]} or, instead of counts,
  /// "proportions": [...] with an optional "total" (default: the number of
  /// rows falling inside the edges).
  static HistogramTarget FromJson(const nlohmann::json& j,
                                  std::size_t rows_in_range);
};

struct RebalanceResult {
  std::vector<ManifestRow> rows;
  /// Bins that have a positive target but no rows to draw from.
  std::vector<std::size_t> unreachable_bins;
  std::size_t dropped = 0;
  std::size_t duplicated = 0;
};

/// Drops rows from over-full bins and repeats rows of under-full bins until
/// every bin holds its (rounded) target count. A repeated row carries
/// "dup_index" (1, 2, ...) and, when it has one, a suffixed "id", so later
/// stages can give it fresh random draws. Rows outside the edges are kept.
/// Row order is preserved; copies follow their source row. Deterministic in
/// seed.
RebalanceResult RebalanceManifest(const std::vector<ManifestRow>& rows,
                                  const HistogramTarget& target,
                                  std::uint64_t seed);

}  // namespace roomlab

#endif  // ROOMLAB_MANIFEST_H_
