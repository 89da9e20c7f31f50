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

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/index.hpp"
#include "overlap/schema.hpp"

namespace overlap {

struct ScoringParams {
  double k1 = 1.2;
  double b = 0.75;
  // IDF values below the floor are raised to it; -infinity disables it.
  double idf_floor = 0.0;
  // Permits k1 outside [1.2, 2.0].
  bool allow_any_k1 = false;

  // Throws DataError on out-of-range parameters.
  void validate() const;
};

struct ProximityMatch {
  TokenSpan a;
  TokenSpan b;
  uint32_t gap = 0;  // tokens strictly between a.last and b.first
};

// Every contiguous occurrence of `phrase` in `tokens`, as inclusive spans.
std::vector<TokenSpan> phrase_positions(std::span<const std::string> tokens,
                                        std::span<const std::string> phrase);

// Passes iff an occurrence of phrase_a ends before an occurrence of
// phrase_b starts with at most `window` tokens in between. Returns the pair
// with the smallest gap (ties: earliest a, then earliest b).
std::optional<ProximityMatch> proximity_filter(std::span<const std::string> tokens,
                                               std::span<const std::string> phrase_a,
                                               std::span<const std::string> phrase_b,
                                               size_t window = kDefaultWindow);

// Natural-log Robertson-Sparck Jones IDF, floored at params.idf_floor.
double idf(const CorpusStats& stats, uint64_t doc_freq, const ScoringParams& params);

// Contribution of one term with frequency tf in a document of `length`.
double bm25_term(double idf_value, uint32_t tf, uint32_t length, double avgdl,
                 const ScoringParams& params);

// Distinct terms of phrase_a ∪ phrase_b ∪ optional_terms, sorted.
std::vector<std::string> query_terms(const OverlapQuery& query);

// BM25 of a tokenized document against the query, with document
// frequencies and statistics taken from `index`.
double bm25_score(const OverlapQuery& query, std::span<const std::string> doc_tokens,
                  const PositionalIndex& index, const ScoringParams& params);

struct ScoredMatch {
  uint32_t doc_id = 0;
  std::string corpus;
  double score = 0.0;
  TokenSpan pred_c;
  TokenSpan pred_q;
  std::string text;
};

struct InstanceOverlap {
  std::string instance_id;
  double max_score = 0.0;
  std::optional<ScoredMatch> best_match;
  size_t match_count = 0;
};

struct SearchResult {
  std::vector<ScoredMatch> matches;  // ranked, truncated to top_k
  size_t match_count = 0;            // documents passing the filter
};

// Candidates are documents containing every token of both phrases; those
// failing the proximity filter are never scored. Survivors are scored with
// their own index's statistics and ranked by (score desc, corpus asc,
// doc_id asc). A null index pointer raises LookupError.
SearchResult search_all(const OverlapQuery& query, std::span<const PositionalIndex* const> indexes,
                        const ScoringParams& params, size_t top_k);
std::vector<ScoredMatch> search(const OverlapQuery& query,
                                std::span<const PositionalIndex* const> indexes,
                                const ScoringParams& params, size_t top_k);

// Max BM25 over all passing documents (0 when none pass).
InstanceOverlap instance_overlap(const OverlapQuery& query,
                                 std::span<const PositionalIndex* const> indexes,
                                 const ScoringParams& params);

// One JSON line: {instance_id, max_score, match_count, best_match}.
std::string overlap_to_json(const InstanceOverlap& overlap,
                            std::span<const ScoredMatch> top = {});
InstanceOverlap overlap_from_json(std::string_view line);

}  // namespace overlap
