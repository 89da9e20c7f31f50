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

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "overlap/pipeline.hpp"

namespace testing_support {

// Two-column TSV (header skipped) as a key -> value map.
inline std::map<std::string, std::string> read_tsv_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::map<std::string, std::string> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

// Stage each sentence left the pipeline at, derived from the stage outputs:
// short, long, connective, antecedent, ungendered, name_list_exhausted or
// perturbed (reached the end).
inline std::map<std::string, std::string> observed_stages(const overlap::PipelineRun& run) {
  std::map<std::string, std::string> stage;
  for (const auto& d : run.length_dropped) stage[d.source_ref] = d.reason == "too_short" ? "short" : "long";
  for (const auto& s : run.sentences) stage[s.id] = "connective";
  for (size_t i : run.connective_pass) stage[run.sentences[i].id] = "antecedent";
  for (const auto& c : run.candidates) stage[c.source_ref] = "candidate";
  for (const auto& s : run.skipped) stage[s.source_ref] = s.reason;
  for (const auto& p : run.perturbed) stage[p.original.source_ref] = "perturbed";
  return stage;
}

}  // namespace testing_support
