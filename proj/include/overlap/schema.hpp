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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/lexicon.hpp"
#include "overlap/text.hpp"

namespace overlap {

// A WSC-style test instance with character spans for both candidates and
// the pronoun. answer is 1 or 2.
struct RawInstance {
  std::string id;
  std::string sentence;
  CharSpan candidate1;
  CharSpan candidate2;
  CharSpan pronoun;
  int answer = 1;
};

// Skeleton of an instance: candidates E1/E2, context predicate, query
// predicate, pronoun P and optional connective, all as token spans.
struct SkeletalInstance {
  std::string id;
  std::vector<Token> tokens;
  TokenSpan e1;
  TokenSpan e2;
  TokenSpan pred_c;
  TokenSpan pred_q;
  TokenSpan pronoun;
  std::optional<TokenSpan> connective;
  // Token positions of E1, E2, P and the connective, ascending.
  std::vector<uint32_t> content_positions;
  int answer = 1;
  // Admitted convention violations, e.g. "candidate_order".
  std::vector<std::string> flags;

  // Space-joined norms of a span.
  std::string text(const TokenSpan& span) const;
};

// Compiled overlap query: phrase_a must precede phrase_b with at most
// `window` tokens between them; optional terms only contribute to scores.
struct OverlapQuery {
  std::string instance_id;
  std::vector<std::string> phrase_a;
  std::vector<std::string> phrase_b;
  size_t window = 10;
  std::set<std::string> optional_terms;

  // Phrase("couldn't lift", "was so heavy", 10) ∩ (because ∪ he ∪ ...)
  std::string to_string() const;
  friend bool operator==(const OverlapQuery&, const OverlapQuery&) = default;
};

inline constexpr size_t kDefaultWindow = 10;

// Connectives are the tokens the tagger marks CONN, so the connective
// lexicon reaches the parser through the tagger.
SkeletalInstance parse_instance(const RawInstance& raw, const Tagger& tagger);

OverlapQuery build_query(const SkeletalInstance& sk, size_t window = kDefaultWindow);

// Line-delimited JSON: {id, sentence, span1:[s,e], span2:[s,e],
// pronoun:[s,e], answer}. Spans are byte offsets, end exclusive.
RawInstance instance_from_json(std::string_view line);
std::string instance_to_json(const RawInstance& raw);
std::vector<RawInstance> read_instances(const std::string& path);

// Audit export of a parsed skeleton as one JSON line.
std::string skeleton_to_json(const SkeletalInstance& sk);

}  // namespace overlap
