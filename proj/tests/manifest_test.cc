// tests/manifest_test.cc

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

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "roomlab/audio.h"
#include "roomlab/manifest.h"

namespace roomlab {
namespace {

std::vector<ManifestRow> Rows(const std::vector<double>& values) {
  std::vector<ManifestRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ManifestRow r;
    r["id"] = "r" + std::to_string(i);
    r["t60"] = values[i];
    rows.push_back(r);
  }
  return rows;
}

std::map<long, int> BinCounts(const std::vector<ManifestRow>& rows) {
  std::map<long, int> c;
  for (const auto& r : rows) ++c[std::lround(std::floor(r["t60"].get<double>()))];
  return c;
}

TEST(JsonLinesTest, RoundTripKeepsKeyOrder) {
  std::istringstream is("{\"b\":1,\"a\":\"x\"}\n\n{\"snr_db\":\"Inf\"}\n");
  const auto rows = ReadJsonLines(is);
  ASSERT_EQ(rows.size(), 2u);
  std::ostringstream os;
  WriteJsonLines(os, rows);
  EXPECT_EQ(os.str(), "{\"b\":1,\"a\":\"x\"}\n{\"snr_db\":\"Inf\"}\n");
}

TEST(JsonLinesTest, BadLinesReportLineNumber) {
  std::istringstream a("{\"a\":1}\n{oops\n");
  try {
    ReadJsonLines(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream b("[1,2]\n");
  EXPECT_THROW(ReadJsonLines(b), Error);
  EXPECT_THROW(ReadJsonLines(std::filesystem::path("/nonexistent.jsonl")), Error);
}

TEST(SnrJsonTest, NumbersAndInf) {
  EXPECT_EQ(SnrFromJson(ManifestRow(12.5)), 12.5);
  EXPECT_TRUE(std::isinf(SnrFromJson(ManifestRow("Inf"))));
  EXPECT_TRUE(std::isinf(SnrFromJson(ManifestRow("inf"))));
  EXPECT_THROW(SnrFromJson(ManifestRow("loud")), Error);
  EXPECT_THROW(SnrFromJson(ManifestRow(nullptr)), Error);
  EXPECT_EQ(SnrToJson(std::numeric_limits<double>::infinity()), ManifestRow("Inf"));
  EXPECT_EQ(SnrToJson(5.0), ManifestRow(5.0));
}

TEST(HistogramTargetTest, FromJson) {
  const auto a = HistogramTarget::FromJson(
      nlohmann::json::parse(R"({"field":"t60","edges":[0,1,2],"counts":[3,4]})"), 0);
  EXPECT_EQ(a.counts, (std::vector<double>{3, 4}));
  const auto b = HistogramTarget::FromJson(
      nlohmann::json::parse(R"({"field":"t60","edges":[0,1,2],"proportions":[1,3]})"), 8);
  EXPECT_EQ(b.counts, (std::vector<double>{2, 6}));
  const auto c = HistogramTarget::FromJson(
      nlohmann::json::parse(
          R"({"field":"t60","edges":[0,1,2],"proportions":[0.5,0.5],"total":10})"),
      8);
  EXPECT_EQ(c.counts, (std::vector<double>{5, 5}));
  EXPECT_THROW(HistogramTarget::FromJson(
                   nlohmann::json::parse(R"({"field":"t60","edges":[0,1,2],"counts":[1]})"), 0),
               Error);
  EXPECT_THROW(HistogramTarget::FromJson(
                   nlohmann::json::parse(R"({"field":"t60","edges":[1,0],"counts":[1]})"), 0),
               Error);
  EXPECT_THROW(HistogramTarget::FromJson(nlohmann::json::parse(R"({"edges":[0,1]})"), 0),
               Error);
}

TEST(RebalanceTest, BalancedIsFixpoint) {
  const auto rows = Rows({0.5, 1.5, 2.5, 0.2, 1.2, 2.2});
  const HistogramTarget t{"t60", {0, 1, 2, 3}, {2, 2, 2}};
  const auto r = RebalanceManifest(rows, t, 1);
  EXPECT_EQ(r.rows, rows);
  EXPECT_EQ(r.dropped, 0u);
  EXPECT_EQ(r.duplicated, 0u);
}

TEST(RebalanceTest, OverfullBinHalved) {
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(0.5);
  for (int i = 0; i < 20; ++i) v.push_back(1.5);
  const HistogramTarget t{"t60", {0, 1, 2}, {20, 20}};
  const auto r = RebalanceManifest(Rows(v), t, 2);
  const auto c = BinCounts(r.rows);
  EXPECT_EQ(c.at(0), 20);
  EXPECT_EQ(c.at(1), 20);
  EXPECT_EQ(r.dropped, 20u);
}

TEST(RebalanceTest, SparseBinRepeated) {
  std::vector<double> v;
  for (int i = 0; i < 20; ++i) v.push_back(0.5);
  for (int i = 0; i < 5; ++i) v.push_back(1.5);
  const HistogramTarget t{"t60", {0, 1, 2}, {20, 20}};
  const auto r = RebalanceManifest(Rows(v), t, 3);
  EXPECT_EQ(BinCounts(r.rows).at(1), 20);
  EXPECT_EQ(r.duplicated, 15u);
  // Every sparse row now appears four times; copies carry distinct ids.
  std::map<std::string, int> by_source;
  std::set<std::string> ids;
  for (const auto& row : r.rows) {
    ids.insert(row["id"].get<std::string>());
    if (row["t60"] == 1.5) {
      const std::string id = row["id"];
      ++by_source[id.substr(0, id.find("_dup"))];
    }
  }
  EXPECT_EQ(ids.size(), r.rows.size());
  for (const auto& [id, n] : by_source) EXPECT_EQ(n, 4) << id;
}

TEST(RebalanceTest, DeterministicAndReportsUnreachable) {
  std::vector<double> v(30, 0.5);
  v.push_back(5.0);  // outside the edges: kept as is
  const HistogramTarget t{"t60", {0, 1, 2}, {10, 4}};
  const auto a = RebalanceManifest(Rows(v), t, 4);
  const auto b = RebalanceManifest(Rows(v), t, 4);
  const auto c = RebalanceManifest(Rows(v), t, 5);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_NE(a.rows, c.rows);
  EXPECT_EQ(a.unreachable_bins, (std::vector<std::size_t>{1}));
  EXPECT_EQ(a.rows.size(), 11u);
  EXPECT_EQ(a.rows.back()["t60"], 5.0);
}

TEST(RebalanceTest, MissingFieldRejected) {
  auto rows = Rows({0.5});
  rows[0].erase("t60");
  const HistogramTarget t{"t60", {0, 1}, {1}};
  EXPECT_THROW(RebalanceManifest(rows, t, 1), Error);
}

}  // namespace
}  // namespace roomlab
