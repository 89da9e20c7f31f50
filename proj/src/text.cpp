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

#include "overlap/text.hpp"

#include <array>
#include <cctype>
#include <string>
#include <unordered_set>

#include "overlap/errors.hpp"

namespace overlap {

namespace {

constexpr std::array<std::string_view, 10> kMultiBytePunct = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99", "\xC2\xAB",
    "\xC2\xBB",     "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA6", "\xE2\x80\x9E"};

// Typographic marks that always separate words, even without whitespace.
// The right single quote is excluded because it doubles as an apostrophe.
constexpr std::array<std::string_view, 7> kMultiByteSeparators = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xC2\xAB", "\xC2\xBB",
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA6"};

constexpr std::string_view kAsciiSeparators = ",;:!?\"()[]{}/|<>";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

size_t multibyte_at(std::string_view s, size_t i, std::span<const std::string_view> marks) {
  for (auto m : marks) {
    if (s.substr(i, m.size()) == m) return m.size();
  }
  return 0;
}

size_t separator_at(std::string_view s, size_t i) {
  char c = s[i];
  if (kAsciiSeparators.find(c) != std::string_view::npos) {
    // Thousands separators stay inside numbers.
    if (c == ',' && i > 0 && i + 1 < s.size() && is_digit(s[i - 1]) && is_digit(s[i + 1])) return 0;
    return 1;
  }
  return multibyte_at(s, i, kMultiByteSeparators);
}

size_t punct_at(std::string_view s, size_t i) {
  if (std::ispunct(static_cast<unsigned char>(s[i]))) return 1;
  return multibyte_at(s, i, kMultiBytePunct);
}

size_t punct_before(std::string_view s, size_t end) {
  if (end == 0) return 0;
  if (std::ispunct(static_cast<unsigned char>(s[end - 1]))) return 1;
  for (auto m : kMultiBytePunct) {
    if (end >= m.size() && s.substr(end - m.size(), m.size()) == m) return m.size();
  }
  return 0;
}

std::string normalize(std::string_view surface) {
  std::string norm;
  norm.reserve(surface.size());
  for (size_t i = 0; i < surface.size();) {
    if (surface.substr(i, 3) == "\xE2\x80\x99" || surface.substr(i, 3) == "\xE2\x80\x98") {
      norm.push_back('\'');
      i += 3;
      continue;
    }
    norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(surface[i]))));
    ++i;
  }
  return norm;
}

template <typename Emit>
void segment(std::string_view text, Emit&& emit) {
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (size_t sep = separator_at(text, i)) {
      i += sep;
      continue;
    }
    size_t start = i;
    while (i < n && !is_space(text[i]) && separator_at(text, i) == 0) ++i;
    size_t a = start;
    size_t b = i;
    while (a < b) {
      size_t len = punct_at(text, a);
      if (len == 0 || a + len > b) break;
      a += len;
    }
    while (b > a) {
      size_t len = punct_before(text.substr(0, b), b);
      if (len == 0 || b - len < a) break;
      b -= len;
    }
    if (a < b) emit(a, b);
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  segment(text, [&](size_t a, size_t b) {
    std::string_view surface = text.substr(a, b - a);
    tokens.push_back(Token{std::string(surface), normalize(surface), CharSpan{a, b}, Tag::kNone});
  });
  return tokens;
}

std::vector<std::string> tokenize_norms(std::string_view text) {
  std::vector<std::string> norms;
  segment(text, [&](size_t a, size_t b) { norms.push_back(normalize(text.substr(a, b - a))); });
  return norms;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  return split_sentences(text, Lexicon::defaults().abbreviations);
}

std::vector<Sentence> split_sentences(std::string_view text, const WordList& abbreviations,
                                      std::string_view id_prefix) {
  std::vector<Sentence> out;
  const size_t n = text.size();

  auto emit = [&](size_t a, size_t b) {
    while (a < b && is_space(text[a])) ++a;
    while (b > a && is_space(text[b - 1])) --b;
    if (a == b) return;
    Sentence s;
    s.id = std::string(id_prefix) + std::to_string(out.size());
    s.raw = std::string(text.substr(a, b - a));
    s.tokens = tokenize(s.raw);
    out.push_back(std::move(s));
  };

  auto guarded = [&](size_t period) {
    size_t w = period;
    while (w > 0 && !is_space(text[w - 1])) --w;
    std::string_view word = text.substr(w, period - w);
    while (!word.empty()) {
      size_t len = punct_at(word, 0);
      if (len == 0) break;
      word.remove_prefix(len);
    }
    if (word.empty()) return false;
    if (word.size() == 1 && is_upper(word[0])) return true;
    return abbreviations.contains(normalize(word));
  };

  size_t start = 0;
  size_t i = 0;
  while (i < n) {
    char c = text[i];
    if (c != '.' && c != '?' && c != '!') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && (text[j] == '.' || text[j] == '?' || text[j] == '!')) ++j;
    const size_t run = j - i;
    while (j < n) {
      if (text[j] == ')' || text[j] == ']' || text[j] == '"' || text[j] == '\'') {
        ++j;
      } else if (text.substr(j, 3) == "\xE2\x80\x9D" || text.substr(j, 3) == "\xE2\x80\x99") {
        j += 3;
      } else if (text.substr(j, 2) == "\xC2\xBB") {
        j += 2;
      } else {
        break;
      }
    }
    if (j >= n || !is_space(text[j])) {
      i = j;
      continue;
    }
    size_t k = j;
    while (k < n && is_space(text[k])) ++k;
    if (k >= n) break;
    bool opener = is_upper(text[k]) || text[k] == '"' || text[k] == '\'' || text[k] == '(' ||
                  text.substr(k, 3) == "\xE2\x80\x9C" || text.substr(k, 3) == "\xE2\x80\x98" ||
                  text.substr(k, 2) == "\xC2\xAB";
    bool single_period = c == '.' && run == 1;
    if (opener && !(single_period && guarded(i))) {
      emit(start, j);
      start = k;
      i = k;
    } else {
      i = j;
    }
  }
  emit(start, n);
  return out;
}

std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::kNone: return "NONE";
    case Tag::kNoun: return "NOUN";
    case Tag::kPropn: return "PROPN";
    case Tag::kVerb: return "VERB";
    case Tag::kPron: return "PRON";
    case Tag::kDet: return "DET";
    case Tag::kAdj: return "ADJ";
    case Tag::kConn: return "CONN";
    case Tag::kOther: return "OTHER";
  }
  return "NONE";
}

Tag parse_tag(std::string_view name) {
  for (Tag t : {Tag::kNoun, Tag::kPropn, Tag::kVerb, Tag::kPron, Tag::kDet, Tag::kAdj, Tag::kConn,
                Tag::kOther}) {
    if (tag_name(t) == name) return t;
  }
  throw DataError("unknown tag: " + std::string(name));
}

std::vector<Token> tag(std::vector<Token> tokens, const Tagger& tagger) {
  tag_in_place(tokens, tagger);
  return tokens;
}

void tag_in_place(std::span<Token> tokens, const Tagger& tagger) {
  std::vector<Tag> tags = tagger.tag(tokens);
  if (tags.size() != tokens.size()) {
    throw DataError("tagger returned " + std::to_string(tags.size()) + " tags for " +
                    std::to_string(tokens.size()) + " tokens");
  }
  for (size_t i = 0; i < tokens.size(); ++i) tokens[i].tag = tags[i];
}

bool is_third_person_pronoun(std::string_view norm) {
  static const std::unordered_set<std::string_view> kThird = {
      "he", "him", "his", "himself", "she", "her", "hers", "herself", "it",
      "its", "itself", "they", "them", "their", "theirs", "themselves"};
  return kThird.count(norm) > 0;
}

int pronoun_gender(std::string_view norm) {
  if (norm == "he" || norm == "him" || norm == "his" || norm == "himself") return 1;
  if (norm == "she" || norm == "her" || norm == "hers" || norm == "herself") return -1;
  return 0;
}

}  // namespace overlap
