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

#include "overlap/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "overlap/errors.hpp"
#include "overlap/retrieval.hpp"

namespace overlap {

namespace {

std::string list_ids(const std::vector<std::string>& ids) {
  constexpr size_t kShown = 50;
  std::string out;
  for (size_t i = 0; i < ids.size() && i < kShown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > kShown) out += ", ... (" + std::to_string(ids.size() - kShown) + " more)";
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  size_t i = s.find_first_not_of(" \t");
  return i == std::string::npos ? std::string() : s.substr(i);
}

}  // namespace

PredictionFile PredictionFile::load(const std::string& path, std::string model_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read predictions: " + path);
  PredictionFile file;
  file.model_name = std::move(model_name);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected <instance_id>\\t<answer>");
    }
    std::string id = line.substr(0, tab);
    std::string value = trim(line.substr(tab + 1));
    if (value != "1" && value != "2") {
      throw DataError(path + ":" + std::to_string(lineno) + ": predicted answer must be 1 or 2");
    }
    if (!file.entries.emplace(id, value[0] - '0').second) {
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate prediction for " + id);
    }
  }
  return file;
}

Partition partition(const ScoreMap& scores, double cutoff) {
  Partition p;
  for (const auto& [id, score] : scores) {
    (score > cutoff ? p.overlap : p.nonoverlap).push_back(id);
  }
  return p;
}

std::optional<double> subset_accuracy(std::span<const std::string> subset,
                                      const PredictionFile& predictions, const GoldMap& gold) {
  std::vector<std::string> missing_pred, missing_gold;
  size_t correct = 0;
  for (const auto& id : subset) {
    auto p = predictions.entries.find(id);
    auto g = gold.find(id);
    if (p == predictions.entries.end()) missing_pred.push_back(id);
    if (g == gold.end()) missing_gold.push_back(id);
    if (p != predictions.entries.end() && g != gold.end() && p->second == g->second) ++correct;
  }
  if (!missing_pred.empty()) {
    throw DataError("model " + predictions.model_name + " has no prediction for " +
                    std::to_string(missing_pred.size()) + " instance(s): " + list_ids(missing_pred));
  }
  if (!missing_gold.empty()) {
    throw DataError("no gold label for " + std::to_string(missing_gold.size()) +
                    " instance(s): " + list_ids(missing_gold));
  }
  if (subset.empty()) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(subset.size());
}

double chi_squared_1df_sf(double statistic) {
  if (statistic <= 0.0) return 1.0;
  return std::erfc(std::sqrt(statistic / 2.0));
}

ChiSquared chi_squared_2x2(const std::array<std::array<double, 2>, 2>& t, bool yates) {
  for (const auto& row : t) {
    for (double cell : row) {
      if (!(cell >= 0.0)) throw StatError(StatError::Kind::kNegativeCell, "negative cell in 2x2 table");
    }
  }
  const double rows[2] = {t[0][0] + t[0][1], t[1][0] + t[1][1]};
  const double cols[2] = {t[0][0] + t[1][0], t[0][1] + t[1][1]};
  const double total = rows[0] + rows[1];
  if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) {
    throw StatError(StatError::Kind::kDegenerateTable, "2x2 table has a zero marginal");
  }
  double stat = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = rows[i] * cols[j] / total;
      double diff = std::abs(t[i][j] - expected);
      if (yates) diff = std::max(0.0, diff - 0.5);
      stat += diff * diff / expected;
    }
  }
  return ChiSquared{stat, chi_squared_1df_sf(stat)};
}

std::vector<PartitionReport> analyze(const GoldMap& gold, const ScoreMap& scores,
                                     std::span<const PredictionFile> predictions,
                                     std::span<const double> cutoffs, bool yates) {
  if (gold.empty()) throw DataError("empty test set");
  std::vector<std::string> unscored;
  ScoreMap test_scores;
  for (const auto& [id, answer] : gold) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      unscored.push_back(id);
    } else {
      test_scores.emplace(id, it->second);
    }
  }
  if (!unscored.empty()) {
    throw DataError("no overlap score for " + std::to_string(unscored.size()) +
                    " instance(s): " + list_ids(unscored));
  }

  std::vector<std::string> all_ids;
  for (const auto& [id, answer] : gold) all_ids.push_back(id);

  std::vector<PartitionReport> reports;
  for (const auto& model : predictions) {
    const double overall = *subset_accuracy(all_ids, model, gold);
    for (double cutoff : cutoffs) {
      Partition part = partition(test_scores, cutoff);
      PartitionReport r;
      r.model = model.model_name;
      r.cutoff = cutoff;
      r.overlap_size = part.overlap.size();
      r.nonoverlap_size = part.nonoverlap.size();
      r.overlap_acc = subset_accuracy(part.overlap, model, gold);
      r.nonoverlap_acc = subset_accuracy(part.nonoverlap, model, gold);
      r.overall_acc = overall;
      if (r.overlap_acc && r.nonoverlap_acc) r.perf_diff = *r.overlap_acc - *r.nonoverlap_acc;

      auto correct_count = [&](size_t size, const std::optional<double>& acc) {
        return acc ? std::round(*acc * static_cast<double>(size)) : 0.0;
      };
      const double oc = correct_count(r.overlap_size, r.overlap_acc);
      const double nc = correct_count(r.nonoverlap_size, r.nonoverlap_acc);
      std::array<std::array<double, 2>, 2> table = {
          {{oc, static_cast<double>(r.overlap_size) - oc},
           {nc, static_cast<double>(r.nonoverlap_size) - nc}}};
      try {
        ChiSquared cs = chi_squared_2x2(table, yates);
        r.chi2 = cs.statistic;
        r.p_value = cs.p_value;
        r.significant = cs.p_value < 0.05;
      } catch (const StatError&) {
        // Degenerate table: no test, not significant.
      }
      reports.push_back(r);
    }
  }
  return reports;
}

OverlapCurve overlap_curve(const ScoreMap& scores, std::span<const double> cutoff_grid,
                           std::string name) {
  for (size_t i = 1; i < cutoff_grid.size(); ++i) {
    if (!(cutoff_grid[i] > cutoff_grid[i - 1])) throw DataError("cutoff grid must be ascending");
  }
  OverlapCurve curve;
  curve.name = std::move(name);
  if (scores.empty()) throw DataError("no scores to plot");
  std::vector<double> sorted;
  sorted.reserve(scores.size());
  for (const auto& [id, s] : scores) sorted.push_back(s);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (double t : cutoff_grid) {
    auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    curve.points.push_back(CurvePoint{t, static_cast<double>(above) / n});
  }
  return curve;
}

ScoreMap read_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read scores: " + path);
  ScoreMap scores;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    InstanceOverlap o;
    try {
      o = overlap_from_json(line);
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!scores.emplace(o.instance_id, o.max_score).second) {
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate score for " + o.instance_id);
    }
  }
  return scores;
}

}  // namespace overlap
