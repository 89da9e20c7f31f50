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

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace overlap {

using ScoreMap = std::map<std::string, double>;  // instance id -> max BM25
using GoldMap = std::map<std::string, int>;      // instance id -> answer

struct PredictionFile {
  std::string model_name;
  std::map<std::string, int> entries;

  // Tab-separated (instance_id, predicted_answer); '#' lines are comments.
  static PredictionFile load(const std::string& path, std::string model_name);
};

struct Partition {
  std::vector<std::string> overlap;     // score > cutoff
  std::vector<std::string> nonoverlap;  // score <= cutoff
};

Partition partition(const ScoreMap& scores, double cutoff);

// Fraction of `subset` predicted correctly; nullopt for an empty subset.
// Throws DataError naming every instance without a prediction or gold label.
std::optional<double> subset_accuracy(std::span<const std::string> subset,
                                      const PredictionFile& predictions, const GoldMap& gold);

struct ChiSquared {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Pearson chi-squared for a 2x2 table, one degree of freedom. Yates'
// continuity correction only when asked. Throws StatError on a zero
// marginal or a negative cell.
ChiSquared chi_squared_2x2(const std::array<std::array<double, 2>, 2>& table, bool yates = false);

// Upper tail of the chi-squared distribution with one degree of freedom.
double chi_squared_1df_sf(double statistic);

struct PartitionReport {
  std::string model;
  double cutoff = 0.0;
  size_t overlap_size = 0;
  size_t nonoverlap_size = 0;
  std::optional<double> overlap_acc;
  std::optional<double> nonoverlap_acc;
  double overall_acc = 0.0;
  std::optional<double> perf_diff;  // overlap_acc - nonoverlap_acc
  std::optional<double> chi2;       // absent when the table is degenerate
  std::optional<double> p_value;
  bool significant = false;         // p_value < 0.05
};

inline const std::vector<double> kDefaultCutoffs = {0.0, 25.0, 35.0};

// One report per (model, cutoff), models in input order. The contingency
// table is subset (overlap, nonoverlap) x outcome (correct, incorrect).
std::vector<PartitionReport> analyze(const GoldMap& gold, const ScoreMap& scores,
                                     std::span<const PredictionFile> predictions,
                                     std::span<const double> cutoffs = kDefaultCutoffs,
                                     bool yates = false);

struct CurvePoint {
  double cutoff = 0.0;
  double proportion = 0.0;
};

struct OverlapCurve {
  std::string name;
  std::vector<CurvePoint> points;
};

// Proportion of instances with score > t at each t of an ascending grid.
OverlapCurve overlap_curve(const ScoreMap& scores, std::span<const double> cutoff_grid,
                           std::string name = "");

// Reads a batch score file (one JSON record per line) into a score map.
ScoreMap read_scores(const std::string& path);

}  // namespace overlap
