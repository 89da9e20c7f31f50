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

#include "overlap/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "overlap/errors.hpp"

namespace overlap {

namespace {

using json = nlohmann::ordered_json;

std::optional<ProximityMatch> best_pair(const std::vector<TokenSpan>& a_matches,
                                        const std::vector<TokenSpan>& b_matches, size_t window) {
  std::optional<ProximityMatch> best;
  for (const TokenSpan& a : a_matches) {
    auto it = std::upper_bound(b_matches.begin(), b_matches.end(), a.last,
                               [](uint32_t pos, const TokenSpan& b) { return pos < b.first; });
    if (it == b_matches.end()) continue;
    uint32_t gap = it->first - a.last - 1;
    if (gap > window) continue;
    if (!best || gap < best->gap) best = ProximityMatch{a, *it, gap};
  }
  return best;
}

// Occurrences of a phrase given the sorted positions of each phrase token.
std::vector<TokenSpan> phrase_from_positions(std::span<const std::span<const uint32_t>> positions) {
  std::vector<TokenSpan> out;
  const auto len = static_cast<uint32_t>(positions.size());
  for (uint32_t p : positions[0]) {
    bool ok = true;
    for (uint32_t j = 1; j < len && ok; ++j) {
      ok = std::binary_search(positions[j].begin(), positions[j].end(), p + j);
    }
    if (ok) out.push_back(TokenSpan{p, p + len - 1});
  }
  return out;
}

struct Survivor {
  uint32_t doc;
  std::vector<uint32_t> entry;  // entry index into each phrase-term list
  ProximityMatch match;
  double score = 0.0;
};

void search_index(const OverlapQuery& query, const PositionalIndex& index,
                  const ScoringParams& params, std::vector<ScoredMatch>& out) {
  std::vector<std::string> phrase_terms(query.phrase_a.begin(), query.phrase_a.end());
  phrase_terms.insert(phrase_terms.end(), query.phrase_b.begin(), query.phrase_b.end());
  std::sort(phrase_terms.begin(), phrase_terms.end());
  phrase_terms.erase(std::unique(phrase_terms.begin(), phrase_terms.end()), phrase_terms.end());

  std::vector<FlatPostings> lists;
  lists.reserve(phrase_terms.size());
  for (const auto& t : phrase_terms) {
    if (index.doc_freq(t) == 0) return;
    lists.push_back(index.flat_postings(t));
  }
  auto slot = [&](const std::string& t) {
    return static_cast<size_t>(std::lower_bound(phrase_terms.begin(), phrase_terms.end(), t) -
                               phrase_terms.begin());
  };
  std::vector<size_t> slots_a, slots_b;
  for (const auto& t : query.phrase_a) slots_a.push_back(slot(t));
  for (const auto& t : query.phrase_b) slots_b.push_back(slot(t));

  size_t driver = 0;
  for (size_t i = 1; i < lists.size(); ++i) {
    if (lists[i].size() < lists[driver].size()) driver = i;
  }

  std::vector<Survivor> survivors;
  std::vector<size_t> cursor(lists.size(), 0);
  std::vector<uint32_t> entry(lists.size());
  std::vector<std::span<const uint32_t>> pos_a(slots_a.size()), pos_b(slots_b.size());
  for (size_t k = 0; k < lists[driver].size(); ++k) {
    const uint32_t doc = lists[driver].docs[k];
    bool all = true;
    for (size_t i = 0; i < lists.size() && all; ++i) {
      if (i == driver) {
        entry[i] = static_cast<uint32_t>(k);
        continue;
      }
      const auto& docs = lists[i].docs;
      auto it = std::lower_bound(docs.begin() + static_cast<std::ptrdiff_t>(cursor[i]), docs.end(), doc);
      cursor[i] = static_cast<size_t>(it - docs.begin());
      if (it == docs.end()) {
        // No later candidate can match either.
        k = lists[driver].size();
        all = false;
        break;
      }
      if (*it != doc) all = false;
      entry[i] = static_cast<uint32_t>(cursor[i]);
    }
    if (!all) continue;
    for (size_t j = 0; j < slots_a.size(); ++j) pos_a[j] = lists[slots_a[j]].positions_of(entry[slots_a[j]]);
    for (size_t j = 0; j < slots_b.size(); ++j) pos_b[j] = lists[slots_b[j]].positions_of(entry[slots_b[j]]);
    auto match = best_pair(phrase_from_positions(pos_a), phrase_from_positions(pos_b), query.window);
    if (!match) continue;
    survivors.push_back(Survivor{doc, entry, *match, 0.0});
  }
  if (survivors.empty()) return;

  const CorpusStats& stats = index.stats();
  for (const auto& term : query_terms(query)) {
    const double w = idf(stats, index.doc_freq(term), params);
    auto ps = std::lower_bound(phrase_terms.begin(), phrase_terms.end(), term);
    if (ps != phrase_terms.end() && *ps == term) {
      const auto& list = lists[static_cast<size_t>(ps - phrase_terms.begin())];
      const size_t s = static_cast<size_t>(ps - phrase_terms.begin());
      for (auto& sv : survivors) {
        sv.score += bm25_term(w, list.tf(sv.entry[s]), index.doc_length(sv.doc), stats.avgdl, params);
      }
      continue;
    }
    if (index.doc_freq(term) == 0) continue;
    DocFrequencies freqs = index.doc_frequencies(term);
    for (auto& sv : survivors) {
      auto it = std::lower_bound(freqs.docs.begin(), freqs.docs.end(), sv.doc);
      if (it == freqs.docs.end() || *it != sv.doc) continue;
      uint32_t tf = freqs.tfs[static_cast<size_t>(it - freqs.docs.begin())];
      sv.score += bm25_term(w, tf, index.doc_length(sv.doc), stats.avgdl, params);
    }
  }

  for (const auto& sv : survivors) {
    out.push_back(ScoredMatch{sv.doc, index.corpus_name(), sv.score, sv.match.a, sv.match.b, {}});
  }
}

json match_json(const ScoredMatch& m) {
  json j;
  j["corpus"] = m.corpus;
  j["doc_id"] = m.doc_id;
  j["score"] = m.score;
  j["text"] = m.text;
  return j;
}

}  // namespace

void ScoringParams::validate() const {
  if (!(b >= 0.0 && b <= 1.0)) throw DataError("b must lie in [0, 1]");
  if (!std::isfinite(k1) || k1 < 0.0) throw DataError("k1 must be finite and non-negative");
  if (!allow_any_k1 && (k1 < 1.2 || k1 > 2.0)) {
    throw DataError("k1 must lie in [1.2, 2.0] unless explicitly overridden");
  }
  if (std::isnan(idf_floor)) throw DataError("idf floor must be a number");
}

std::vector<TokenSpan> phrase_positions(std::span<const std::string> tokens,
                                        std::span<const std::string> phrase) {
  std::vector<TokenSpan> out;
  if (phrase.empty() || phrase.size() > tokens.size()) return out;
  for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
      out.push_back(TokenSpan{static_cast<uint32_t>(i), static_cast<uint32_t>(i + phrase.size() - 1)});
    }
  }
  return out;
}

std::optional<ProximityMatch> proximity_filter(std::span<const std::string> tokens,
                                               std::span<const std::string> phrase_a,
                                               std::span<const std::string> phrase_b, size_t window) {
  return best_pair(phrase_positions(tokens, phrase_a), phrase_positions(tokens, phrase_b), window);
}

double idf(const CorpusStats& stats, uint64_t doc_freq, const ScoringParams& params) {
  const double n = static_cast<double>(stats.num_docs);
  const double df = static_cast<double>(doc_freq);
  return std::max(params.idf_floor, std::log((n - df + 0.5) / (df + 0.5)));
}

double bm25_term(double idf_value, uint32_t tf, uint32_t length, double avgdl,
                 const ScoringParams& params) {
  if (tf == 0) return 0.0;
  const double f = tf;
  const double norm = 1.0 - params.b + params.b * static_cast<double>(length) / avgdl;
  return idf_value * f * (params.k1 + 1.0) / (f + params.k1 * norm);
}

std::vector<std::string> query_terms(const OverlapQuery& query) {
  std::vector<std::string> terms(query.phrase_a.begin(), query.phrase_a.end());
  terms.insert(terms.end(), query.phrase_b.begin(), query.phrase_b.end());
  terms.insert(terms.end(), query.optional_terms.begin(), query.optional_terms.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

double bm25_score(const OverlapQuery& query, std::span<const std::string> doc_tokens,
                  const PositionalIndex& index, const ScoringParams& params) {
  std::map<std::string_view, uint32_t> counts;
  for (const auto& t : doc_tokens) ++counts[t];
  double score = 0.0;
  for (const auto& term : query_terms(query)) {
    auto it = counts.find(term);
    if (it == counts.end()) continue;
    score += bm25_term(idf(index.stats(), index.doc_freq(term), params), it->second,
                       static_cast<uint32_t>(doc_tokens.size()), index.stats().avgdl, params);
  }
  return score;
}

SearchResult search_all(const OverlapQuery& query, std::span<const PositionalIndex* const> indexes,
                        const ScoringParams& params, size_t top_k) {
  if (query.phrase_a.empty() || query.phrase_b.empty()) {
    throw DataError("query " + query.instance_id + " has an empty predicate phrase");
  }
  for (size_t i = 0; i < indexes.size(); ++i) {
    if (indexes[i] == nullptr) throw LookupError("unknown index");
    for (size_t j = 0; j < i; ++j) {
      if (indexes[j]->corpus_name() == indexes[i]->corpus_name()) {
        throw DataError("two indexes share the corpus name " + indexes[i]->corpus_name());
      }
    }
  }
  std::vector<ScoredMatch> matches;
  for (const PositionalIndex* index : indexes) search_index(query, *index, params, matches);
  SearchResult result;
  result.match_count = matches.size();
  auto rank = [](const ScoredMatch& x, const ScoredMatch& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.corpus != y.corpus) return x.corpus < y.corpus;
    return x.doc_id < y.doc_id;
  };
  if (top_k < matches.size()) {
    std::partial_sort(matches.begin(), matches.begin() + static_cast<std::ptrdiff_t>(top_k),
                      matches.end(), rank);
    matches.resize(top_k);
  } else {
    std::sort(matches.begin(), matches.end(), rank);
  }
  for (auto& m : matches) {
    for (const PositionalIndex* index : indexes) {
      if (index->corpus_name() == m.corpus) {
        m.text = index->doc(m.doc_id).text;
        break;
      }
    }
  }
  result.matches = std::move(matches);
  return result;
}

std::vector<ScoredMatch> search(const OverlapQuery& query,
                                std::span<const PositionalIndex* const> indexes,
                                const ScoringParams& params, size_t top_k) {
  return search_all(query, indexes, params, top_k).matches;
}

InstanceOverlap instance_overlap(const OverlapQuery& query,
                                 std::span<const PositionalIndex* const> indexes,
                                 const ScoringParams& params) {
  SearchResult r = search_all(query, indexes, params, 1);
  InstanceOverlap out;
  out.instance_id = query.instance_id;
  out.match_count = r.match_count;
  if (!r.matches.empty()) {
    out.best_match = r.matches.front();
    out.max_score = std::max(0.0, out.best_match->score);
  }
  return out;
}

std::string overlap_to_json(const InstanceOverlap& overlap, std::span<const ScoredMatch> top) {
  json j;
  j["instance_id"] = overlap.instance_id;
  j["max_score"] = overlap.max_score;
  j["match_count"] = overlap.match_count;
  j["best_match"] = overlap.best_match ? match_json(*overlap.best_match) : json(nullptr);
  if (!top.empty()) {
    json arr = json::array();
    for (const auto& m : top) arr.push_back(match_json(m));
    j["top"] = arr;
  }
  return j.dump();
}

InstanceOverlap overlap_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    InstanceOverlap o;
    o.instance_id = j.at("instance_id").get<std::string>();
    o.max_score = j.at("max_score").get<double>();
    o.match_count = j.value("match_count", size_t{0});
    if (j.contains("best_match") && !j["best_match"].is_null()) {
      const auto& b = j["best_match"];
      ScoredMatch m;
      m.corpus = b.at("corpus").get<std::string>();
      m.doc_id = b.at("doc_id").get<uint32_t>();
      m.score = b.at("score").get<double>();
      m.text = b.value("text", std::string());
      o.best_match = m;
    }
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed score record: ") + e.what());
  }
}

}  // namespace overlap
