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

#include "overlap/schema.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "overlap/errors.hpp"

namespace overlap {

namespace {

using json = nlohmann::ordered_json;

const std::unordered_set<std::string_view> kParticles = {
    "to", "up", "down", "out", "off", "away", "back", "over", "not", "never", "n't"};
const std::unordered_set<std::string_view> kPossessivePronouns = {
    "his", "her", "its", "their", "my", "our", "your", "hers", "theirs"};

bool is_particle(const Token& t) { return kParticles.count(t.norm) > 0; }
bool is_negation(const Token& t) { return t.norm == "not" || t.norm == "never"; }

class ChunkFinder {
 public:
  ChunkFinder(const std::vector<Token>& tokens, const std::vector<bool>& blocked)
      : tokens_(tokens), blocked_(blocked) {}

  bool open(uint32_t pos, uint32_t limit) const { return pos < limit && !blocked_[pos]; }
  bool verbal(uint32_t pos) const {
    return tokens_[pos].tag == Tag::kVerb || is_particle(tokens_[pos]);
  }

  // Verb-headed chunk starting exactly at `start`: verbs, auxiliaries,
  // negation and particles, then up to three trailing ADJ/OTHER tokens.
  std::optional<TokenSpan> forward(uint32_t start, uint32_t limit) const {
    if (!open(start, limit)) return std::nullopt;
    const Token& head = tokens_[start];
    bool starts = head.tag == Tag::kVerb ||
                  (is_negation(head) && open(start + 1, limit) && tokens_[start + 1].tag == Tag::kVerb);
    if (!starts) return std::nullopt;
    uint32_t end = start;
    while (open(end + 1, limit) && verbal(end + 1)) ++end;
    while (end > start && tokens_[end].norm == "to") --end;
    if (!has_verb(start, end)) return std::nullopt;
    for (int extra = 0; extra < 3 && open(end + 1, limit); ++extra) {
      Tag t = tokens_[end + 1].tag;
      if (t != Tag::kAdj && t != Tag::kOther) break;
      ++end;
    }
    return TokenSpan{start, end};
  }

  // Verb-headed chunk ending exactly at `end`, not reaching below `floor`.
  std::optional<TokenSpan> backward(uint32_t end, uint32_t floor) const {
    if (end < floor || blocked_[end] || !verbal(end)) return std::nullopt;
    uint32_t start = end;
    while (start > floor && !blocked_[start - 1] && verbal(start - 1)) --start;
    if (!has_verb(start, end)) return std::nullopt;
    return TokenSpan{start, end};
  }

  std::vector<TokenSpan> all(uint32_t lo, uint32_t hi) const {
    std::vector<TokenSpan> out;
    uint32_t pos = lo;
    while (pos < hi) {
      if (auto c = forward(pos, hi)) {
        out.push_back(*c);
        pos = c->last + 1;
      } else {
        ++pos;
      }
    }
    return out;
  }

 private:
  bool has_verb(uint32_t a, uint32_t b) const {
    for (uint32_t i = a; i <= b; ++i) {
      if (tokens_[i].tag == Tag::kVerb) return true;
    }
    return false;
  }

  const std::vector<Token>& tokens_;
  const std::vector<bool>& blocked_;
};

TokenSpan to_token_span(const std::vector<Token>& tokens, const CharSpan& span,
                        std::string_view what, const std::string& id) {
  std::optional<uint32_t> first;
  uint32_t last = 0;
  for (uint32_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].span.start < span.end && tokens[i].span.end > span.start) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) {
    throw ParseError(ParseError::Kind::kBadSpan,
                     std::string(what) + " span covers no tokens in instance " + id);
  }
  return TokenSpan{*first, last};
}

bool overlaps(const TokenSpan& a, const TokenSpan& b) { return a.first <= b.last && b.first <= a.last; }

CharSpan span_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2) {
    throw DataError(std::string("field ") + key + " must be [start, end]");
  }
  return CharSpan{j[key][0].get<size_t>(), j[key][1].get<size_t>()};
}

json span_json(const TokenSpan& s) { return json::array({s.first, s.last}); }

}  // namespace

std::string SkeletalInstance::text(const TokenSpan& span) const {
  std::string out;
  for (uint32_t i = span.first; i <= span.last && i < tokens.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += tokens[i].norm;
  }
  return out;
}

SkeletalInstance parse_instance(const RawInstance& raw, const Tagger& tagger) {
  for (const CharSpan* s : {&raw.candidate1, &raw.candidate2, &raw.pronoun}) {
    if (s->start >= s->end || s->end > raw.sentence.size()) {
      throw ParseError(ParseError::Kind::kBadSpan, "span outside sentence in instance " + raw.id);
    }
  }

  SkeletalInstance sk;
  sk.id = raw.id;
  sk.answer = raw.answer;
  sk.tokens = tag(tokenize(raw.sentence), tagger);
  const auto n = static_cast<uint32_t>(sk.tokens.size());

  sk.e1 = to_token_span(sk.tokens, raw.candidate1, "candidate 1", raw.id);
  sk.e2 = to_token_span(sk.tokens, raw.candidate2, "candidate 2", raw.id);
  sk.pronoun = to_token_span(sk.tokens, raw.pronoun, "pronoun", raw.id);
  if (overlaps(sk.e1, sk.e2) || overlaps(sk.e1, sk.pronoun) || overlaps(sk.e2, sk.pronoun)) {
    throw ParseError(ParseError::Kind::kBadSpan, "overlapping spans in instance " + raw.id);
  }
  if (sk.pronoun.size() != 1) {
    throw ParseError(ParseError::Kind::kBadPronoun, "pronoun spans several tokens in " + raw.id);
  }
  Token& p = sk.tokens[sk.pronoun.first];
  if (p.tag != Tag::kPron && !kPossessivePronouns.count(p.norm)) {
    throw ParseError(ParseError::Kind::kBadPronoun,
                     "pronoun '" + p.surface + "' is not a pronoun in " + raw.id);
  }
  p.tag = Tag::kPron;

  if (sk.e1.first > sk.e2.first) sk.flags.push_back("candidate_order");
  if (sk.pronoun.first < sk.e1.first || sk.pronoun.first < sk.e2.first) {
    sk.flags.push_back("pronoun_before_candidate");
  }

  const TokenSpan& left = sk.e1.first <= sk.e2.first ? sk.e1 : sk.e2;
  const TokenSpan& right = sk.e1.first <= sk.e2.first ? sk.e2 : sk.e1;

  // Connective: the CONN token closest before the pronoun, after the
  // candidates that precede it.
  uint32_t conn_floor = 0;
  for (const TokenSpan* c : {&sk.e1, &sk.e2}) {
    if (c->last < sk.pronoun.first) conn_floor = std::max(conn_floor, c->last + 1);
  }
  for (uint32_t i = sk.pronoun.first; i-- > conn_floor;) {
    if (sk.tokens[i].tag == Tag::kConn) {
      sk.connective = TokenSpan{i, i};
      break;
    }
  }

  std::vector<bool> blocked(n, false);
  for (const TokenSpan* s : {&sk.e1, &sk.e2, &sk.pronoun}) {
    for (uint32_t i = s->first; i <= s->last; ++i) blocked[i] = true;
  }
  if (sk.connective) blocked[sk.connective->first] = true;

  ChunkFinder finder(sk.tokens, blocked);

  const uint32_t context_end = sk.connective ? sk.connective->first : sk.pronoun.first;
  std::vector<TokenSpan> context_chunks = finder.all(0, context_end);
  std::optional<TokenSpan> pred_c;
  for (const auto& c : context_chunks) {
    if (c.first > left.last && c.last < right.first) {
      pred_c = c;
      break;
    }
  }
  if (!pred_c) {
    for (const auto& c : context_chunks) {
      if (c.last < left.first) pred_c = c;
    }
  }
  if (!pred_c) {
    for (const auto& c : context_chunks) {
      if (c.first > right.last) {
        pred_c = c;
        break;
      }
    }
  }
  if (!pred_c) {
    throw ParseError(ParseError::Kind::kMissingPredicate, "no context predicate in " + raw.id);
  }
  sk.pred_c = *pred_c;
  for (uint32_t i = sk.pred_c.first; i <= sk.pred_c.last; ++i) blocked[i] = true;

  // Query predicate: the chunk right after the pronoun, else the chunk
  // right before it, else the nearest chunk between connective and pronoun.
  const uint32_t query_floor = sk.connective ? sk.connective->last + 1 : conn_floor;
  std::optional<TokenSpan> pred_q = finder.forward(sk.pronoun.last + 1, n);
  if (!pred_q && sk.pronoun.first > query_floor) {
    pred_q = finder.backward(sk.pronoun.first - 1, query_floor);
    if (!pred_q) {
      auto chunks = finder.all(query_floor, sk.pronoun.first);
      if (!chunks.empty()) pred_q = chunks.back();
    }
  }
  if (!pred_q) {
    throw ParseError(ParseError::Kind::kMissingPredicate, "no query predicate in " + raw.id);
  }
  sk.pred_q = *pred_q;

  for (const TokenSpan* s : {&sk.e1, &sk.e2, &sk.pronoun}) {
    for (uint32_t i = s->first; i <= s->last; ++i) sk.content_positions.push_back(i);
  }
  if (sk.connective) sk.content_positions.push_back(sk.connective->first);
  std::sort(sk.content_positions.begin(), sk.content_positions.end());
  return sk;
}

OverlapQuery build_query(const SkeletalInstance& sk, size_t window) {
  OverlapQuery q;
  q.instance_id = sk.id;
  q.window = window;
  for (uint32_t i = sk.pred_c.first; i <= sk.pred_c.last; ++i) q.phrase_a.push_back(sk.tokens[i].norm);
  for (uint32_t i = sk.pred_q.first; i <= sk.pred_q.last; ++i) q.phrase_b.push_back(sk.tokens[i].norm);
  for (uint32_t pos : sk.content_positions) q.optional_terms.insert(sk.tokens[pos].norm);
  return q;
}

std::string OverlapQuery::to_string() const {
  auto join = [](const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out.push_back(' ');
      out += w;
    }
    return out;
  };
  std::string out = "Phrase(\"" + join(phrase_a) + "\", \"" + join(phrase_b) + "\", " +
                    std::to_string(window) + ")";
  if (!optional_terms.empty()) {
    out += " \xE2\x88\xA9 (";
    bool first = true;
    for (const auto& t : optional_terms) {
      if (!first) out += " \xE2\x88\xAA ";
      out += t;
      first = false;
    }
    out += ")";
  }
  return out;
}

RawInstance instance_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed instance JSON: ") + e.what());
  }
  try {
    RawInstance raw;
    raw.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    raw.sentence = j.at("sentence").get<std::string>();
    raw.candidate1 = span_from_json(j, "span1");
    raw.candidate2 = span_from_json(j, "span2");
    raw.pronoun = span_from_json(j, "pronoun");
    raw.answer = j.at("answer").get<int>();
    if (raw.answer != 1 && raw.answer != 2) throw DataError("answer must be 1 or 2 in " + raw.id);
    for (const CharSpan* s : {&raw.candidate1, &raw.candidate2, &raw.pronoun}) {
      if (s->start >= s->end || s->end > raw.sentence.size()) {
        throw DataError("span outside sentence in instance " + raw.id);
      }
    }
    return raw;
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid instance record: ") + e.what());
  }
}

std::string instance_to_json(const RawInstance& raw) {
  json j;
  j["id"] = raw.id;
  j["sentence"] = raw.sentence;
  j["span1"] = json::array({raw.candidate1.start, raw.candidate1.end});
  j["span2"] = json::array({raw.candidate2.start, raw.candidate2.end});
  j["pronoun"] = json::array({raw.pronoun.start, raw.pronoun.end});
  j["answer"] = raw.answer;
  return j.dump();
}

std::vector<RawInstance> read_instances(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read instances: " + path);
  std::vector<RawInstance> out;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(instance_from_json(line));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(out.back().id).second) {
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate instance id " + out.back().id);
    }
  }
  return out;
}

std::string skeleton_to_json(const SkeletalInstance& sk) {
  json j;
  j["id"] = sk.id;
  json tokens = json::array();
  json tags = json::array();
  for (const auto& t : sk.tokens) {
    tokens.push_back(t.norm);
    tags.push_back(std::string(tag_name(t.tag)));
  }
  j["tokens"] = tokens;
  j["tags"] = tags;
  j["e1"] = span_json(sk.e1);
  j["e2"] = span_json(sk.e2);
  j["pred_c"] = span_json(sk.pred_c);
  j["pred_q"] = span_json(sk.pred_q);
  j["pronoun"] = span_json(sk.pronoun);
  j["connective"] = sk.connective ? span_json(*sk.connective) : json(nullptr);
  j["pred_c_text"] = sk.text(sk.pred_c);
  j["pred_q_text"] = sk.text(sk.pred_q);
  json content = json::array();
  for (uint32_t pos : sk.content_positions) content.push_back(sk.tokens[pos].norm);
  j["content_words"] = content;
  j["answer"] = sk.answer;
  j["flags"] = sk.flags;
  return j.dump();
}

}  // namespace overlap
