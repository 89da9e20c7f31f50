// Copyright 2026 The Overlap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>

#include "overlap/report.hpp"
#include "support.hpp"

using namespace overlap;
using testing_support::fixture;
using testing_support::ScratchDir;

namespace {

std::vector<PartitionReport> sample_reports() {
  PartitionReport strong{"bert", 0.0, 40, 60, 1.0, 0.25, 0.55, 0.75, 45.0, 1e-9, true};
  PartitionReport even{"lm", 25.0, 10, 90, 0.5, 0.5, 0.5, 0.0, 0.0, 1.0, false};
  PartitionReport empty{"lm", 35.0, 0, 100, std::nullopt, 0.5, 0.5, std::nullopt, std::nullopt, std::nullopt, false};
  return {strong, even, empty};
}

size_t count(const std::string& haystack, const std::string& needle) {
  size_t n = 0;
  for (size_t at = haystack.find(needle); at != std::string::npos; at = haystack.find(needle, at + 1)) ++n;
  return n;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST(TablesTxt, MatchesGolden) {
  EXPECT_EQ(tables_txt(sample_reports()), slurp(fixture("report/tables.txt")));
}

TEST(TablesCsv, OneRowPerModelAndCutoff) {
  std::vector<PartitionReport> reports;
  for (const char* model : {"a", "b"}) {
    for (double cutoff : {0.0, 25.0, 35.0}) reports.push_back({model, cutoff, 1, 1, 1.0, 0.0, 0.5, 1.0, std::nullopt, std::nullopt, false});
  }
  const std::string csv = tables_csv(reports);
  EXPECT_EQ(count(csv, "\n"), 7u);
  EXPECT_TRUE(csv.starts_with(
      "model,cutoff,overall_acc,overlap_size,overlap_acc,nonoverlap_size,nonoverlap_acc,perf_diff,chi2,p_value,"
      "significant\n"));
  EXPECT_NE(csv.find("\nb,35,0.5,1,1,1,0,1,,,false\n"), std::string::npos) << csv;
}

TEST(TablesCsv, QuotesModelNamesWithCommas) {
  PartitionReport r{"m,1", 0.0, 1, 1, 1.0, 0.0, 0.5, 1.0, std::nullopt, std::nullopt, false};
  EXPECT_NE(tables_csv(std::span(&r, 1)).find("\n\"m,1\",0,"), std::string::npos);
}

TEST(CurveCsv, Rows) {
  const std::vector<OverlapCurve> curves = {{"wsc", {{0.0, 1.0}, {1.0, 0.5}}}};
  EXPECT_EQ(curve_csv(curves), "curve,cutoff,proportion\nwsc,0,1\nwsc,1,0.5\n");
}

TEST(CurveSvg, SinglePointHasOneMarkerAndNoLine) {
  const std::vector<OverlapCurve> curves = {{"solo", {{10.0, 0.3}}}};
  const std::string svg = curve_svg(curves);
  EXPECT_EQ(count(svg, "<circle"), 1u);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_NE(svg.find("BM25 score cutoff"), std::string::npos);
  EXPECT_NE(svg.find("% test set overlap"), std::string::npos);
  EXPECT_NE(svg.find(">solo<"), std::string::npos);
}

TEST(CurveSvg, OneLineAndMarkerSetPerCurve) {
  const std::vector<OverlapCurve> curves = {{"a", {{0, 1.0}, {1, 0.5}, {2, 0.1}}}, {"b&c", {{0, 0.2}, {1, 0.0}}}};
  const std::string svg = curve_svg(curves);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_EQ(count(svg, "<circle"), 5u);
  EXPECT_NE(svg.find("b&amp;c"), std::string::npos);
}

TEST(EmitReport, WritesFilesDeterministically) {
  ScratchDir dir("report_emit");
  const auto reports = sample_reports();
  const std::vector<OverlapCurve> curves = {{"x", {{0, 0.5}, {1, 0.25}}}};
  emit_report(reports, curves, dir / "one");
  emit_report(reports, curves, dir / "two");
  for (const char* name : {"tables.csv", "tables.txt", "curve.csv", "curve.svg"}) {
    ASSERT_TRUE(std::filesystem::exists(dir / "one" / name)) << name;
    EXPECT_EQ(slurp(dir / "one" / name), slurp(dir / "two" / name)) << name;
  }
  emit_report(reports, {}, dir / "tables_only");
  EXPECT_FALSE(std::filesystem::exists(dir / "tables_only" / "curve.svg"));
}
