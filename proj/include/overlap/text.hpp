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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/lexicon.hpp"

namespace overlap {

// Coarse part-of-speech classes used by the chunk rules.
enum class Tag : uint8_t { kNone, kNoun, kPropn, kVerb, kPron, kDet, kAdj, kConn, kOther };

std::string_view tag_name(Tag tag);
// Accepts the upper-case names produced by tag_name(); throws DataError.
Tag parse_tag(std::string_view name);

// Half-open byte range [start, end).
struct CharSpan {
  size_t start = 0;
  size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

// Inclusive token range [first, last].
struct TokenSpan {
  uint32_t first = 0;
  uint32_t last = 0;
  uint32_t size() const { return last - first + 1; }
  bool contains(uint32_t pos) const { return pos >= first && pos <= last; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Token {
  std::string surface;
  std::string norm;
  CharSpan span;  // offsets into the owning sentence's raw text
  Tag tag = Tag::kNone;
};

struct Sentence {
  std::string id;
  std::string raw;
  std::vector<Token> tokens;
};

// Splits `text` on whitespace and hard separators, strips surrounding
// punctuation and keeps internal apostrophes, hyphens and periods. norm is
// the ASCII-lowercased surface with typographic apostrophes folded to '\''.
// No stopword removal, no stemming.
std::vector<Token> tokenize(std::string_view text);

// Same segmentation as tokenize() but only produces the norms.
std::vector<std::string> tokenize_norms(std::string_view text);

// Rule-based splitter. A boundary is a run of [.?!] (plus closing quotes or
// brackets) followed by whitespace and then an uppercase letter or an
// opening quote. A period ending a word from `abbreviations`, or a single
// capital initial, never splits. Sentences are whitespace-trimmed, never
// empty, and tokenized; ids are "<id_prefix><ordinal>".
std::vector<Sentence> split_sentences(std::string_view text,
                                      const WordList& abbreviations,
                                      std::string_view id_prefix = "");
std::vector<Sentence> split_sentences(std::string_view text);

// Maps a token sequence to one coarse tag per token.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<Tag> tag(std::span<const Token> tokens) const = 0;
};

// Adapts any callable to the Tagger contract.
class FunctionTagger : public Tagger {
 public:
  using Fn = std::function<std::vector<Tag>(std::span<const Token>)>;
  explicit FunctionTagger(Fn fn) : fn_(std::move(fn)) {}
  std::vector<Tag> tag(std::span<const Token> tokens) const override { return fn_(tokens); }

 private:
  Fn fn_;
};

// Default tagger: closed-class lexicons, capitalization, suffix rules and a
// handful of left/right context rules. Unknown words default to NOUN.
class HeuristicTagger : public Tagger {
 public:
  explicit HeuristicTagger(const Lexicon& lexicon = Lexicon::defaults()) : lexicon_(&lexicon) {}
  std::vector<Tag> tag(std::span<const Token> tokens) const override;

 private:
  const Lexicon* lexicon_;
};

// Fills Token::tag. Throws DataError if the tagger breaks the
// equal-length contract.
std::vector<Token> tag(std::vector<Token> tokens, const Tagger& tagger);
void tag_in_place(std::span<Token> tokens, const Tagger& tagger);

// Closed-class helpers shared with the schema and pipeline modules.
bool is_third_person_pronoun(std::string_view norm);
// +1 male, -1 female, 0 ungendered or not a pronoun.
int pronoun_gender(std::string_view norm);

}  // namespace overlap
