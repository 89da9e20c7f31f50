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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "overlap/errors.hpp"
#include "overlap/index.hpp"
#include "overlap/retrieval.hpp"

using namespace overlap;

namespace {

using Doc = std::vector<std::string>;

PositionalIndex build(const std::vector<Doc>& corpus, const std::string& name = "c") {
  IndexBuilder builder(name);
  for (size_t i = 0; i < corpus.size(); ++i) {
    std::string text;
    for (const auto& w : corpus[i]) text += (text.empty() ? "" : " ") + w;
    builder.add(corpus[i], text, std::to_string(i));
  }
  return std::move(builder).finish();
}

OverlapQuery running_query() {
  OverlapQuery q;
  q.instance_id = "wsc";
  q.phrase_a = {"couldn't", "lift"};
  q.phrase_b = {"was", "so", "heavy"};
  q.optional_terms = {"the", "man", "his", "son", "because", "he"};
  return q;
}

}  // namespace

TEST(Idf, DocumentedValues) {
  ScoringParams p;
  // ln(90.5 / 10.5) = 2.15397...
  EXPECT_NEAR(idf({100, 0, 0}, 10, p), std::log(90.5 / 10.5), 1e-12);
  EXPECT_NEAR(idf({100, 0, 0}, 10, p), 2.15397, 1e-5);
  EXPECT_EQ(idf({4, 0, 0}, 3, p), 0.0);
  EXPECT_NEAR(idf({1, 0, 0}, 0, p), 1.0986, 1e-4);
  p.idf_floor = -std::numeric_limits<double>::infinity();
  EXPECT_LT(idf({4, 0, 0}, 3, p), 0.0);
}

TEST(Bm25Term, ZeroFrequencyAndLengthCancellation) {
  ScoringParams p;
  EXPECT_EQ(bm25_term(2.0, 0, 10, 10.0, p), 0.0);
  EXPECT_NEAR(bm25_term(1.7, 1, 12, 12.0, p), 1.7, 1e-12);
}

TEST(ScoringParams, Validation) {
  ScoringParams p;
  EXPECT_NO_THROW(p.validate());
  p.k1 = 3.0;
  EXPECT_THROW(p.validate(), DataError);
  p.allow_any_k1 = true;
  EXPECT_NO_THROW(p.validate());
  p.b = 1.5;
  EXPECT_THROW(p.validate(), DataError);
}

TEST(PhrasePositions, Examples) {
  const Doc doc = {"1", "man", "stopped", "to", "get", "it", "but", "he", "couldn't", "lift",
                   "it", "because", "it", "was", "so", "heavy"};
  const Doc was_so_heavy = {"was", "so", "heavy"};
  const auto hits = phrase_positions(doc, was_so_heavy);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0], (TokenSpan{13, 15}));
  const Doc it = {"it"};
  EXPECT_EQ(phrase_positions(doc, it).size(), 3u);
  const Doc absent = {"absent"};
  EXPECT_TRUE(phrase_positions(doc, absent).empty());
}

TEST(ProximityFilter, Examples) {
  const Doc doc = {"1", "man", "stopped", "to", "get", "it", "but", "he", "couldn't", "lift",
                   "it", "because", "it", "was", "so", "heavy"};
  const auto m = proximity_filter(doc, running_query().phrase_a, running_query().phrase_b, 10);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->a, (TokenSpan{8, 9}));
  EXPECT_EQ(m->b, (TokenSpan{13, 15}));
  EXPECT_EQ(m->gap, 3u);

  const Doc reversed = {"it", "was", "so", "heavy", "and", "i", "couldn't", "lift", "it"};
  EXPECT_FALSE(proximity_filter(reversed, running_query().phrase_a, running_query().phrase_b, 10));

  auto with_gap = [](size_t gap) {
    Doc d = {"a", "b"};
    for (size_t i = 0; i < gap; ++i) d.push_back("x");
    d.push_back("c");
    return d;
  };
  const Doc a = {"a", "b"}, c = {"c"};
  EXPECT_TRUE(proximity_filter(with_gap(10), a, c, 10));
  EXPECT_FALSE(proximity_filter(with_gap(11), a, c, 10));
  EXPECT_TRUE(proximity_filter(with_gap(0), a, c, 10));
}

TEST(ProximityFilter, PicksMinimumGap) {
  const Doc doc = {"a", "x", "x", "a", "x", "b", "x", "b"};
  const Doc a = {"a"}, b = {"b"};
  const auto m = proximity_filter(doc, a, b, 10);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->a.first, 3u);
  EXPECT_EQ(m->b.first, 5u);
  EXPECT_EQ(m->gap, 1u);
}

TEST(ProximityFilter, OverlappingPhrasesDoNotCount) {
  // "b" inside the span of phrase a does not satisfy the ordering.
  const Doc doc = {"a", "b"};
  const Doc a = {"a", "b"}, b = {"b"};
  EXPECT_FALSE(proximity_filter(doc, a, b, 10));
}

TEST(Bm25Oracle, ToyCorpusWithRunningQuery) {
  const std::vector<Doc> corpus = {
      {"the", "man", "couldn't", "lift", "his", "son", "because", "he", "was", "so", "heavy"},
      {"1", "man", "stopped", "to", "get", "it", "but", "he", "couldn't", "lift", "it", "because", "it", "was",
       "so", "heavy"},
      {"john", "couldn't", "lift", "melissa", "and", "she", "was", "so", "heavy"},
      {"it", "was", "so", "heavy", "that", "he", "couldn't", "lift", "it"},
      {"the", "weather", "was", "nice"},
  };
  const PositionalIndex index = build(corpus);
  const OverlapQuery q = running_query();
  const auto expected = oracle::brute_force_search(corpus, q.phrase_a, q.phrase_b, q.optional_terms, 10);
  ASSERT_EQ(expected.size(), 3u);
  for (const auto& e : expected) {
    EXPECT_NEAR(bm25_score(q, corpus[e.doc], index, {}), e.score, 1e-9);
  }
  const PositionalIndex* idx[] = {&index};
  const auto results = search(q, idx, {}, 10);
  ASSERT_EQ(results.size(), expected.size());
  for (const auto& r : results) {
    auto it = std::find_if(expected.begin(), expected.end(), [&](const auto& e) { return e.doc == r.doc_id; });
    ASSERT_NE(it, expected.end());
    EXPECT_NEAR(r.score, it->score, 1e-9);
  }
  EXPECT_EQ(results.front().doc_id, 0u);  // the exact copy
}

TEST(Search, MergesIndexesWithTieBreaks) {
  const std::vector<Doc> docs = {{"a", "b", "c"}, {"a", "b", "c"}};
  const PositionalIndex x = build(docs, "x"), y = build(docs, "y");
  OverlapQuery q;
  q.phrase_a = {"a"};
  q.phrase_b = {"c"};
  const PositionalIndex* idx[] = {&y, &x};
  const auto results = search(q, idx, {}, 10);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_EQ(results[0].corpus, "x");
  EXPECT_EQ(results[0].doc_id, 0u);
  EXPECT_EQ(results[1].corpus, "x");
  EXPECT_EQ(results[1].doc_id, 1u);
  EXPECT_EQ(results[2].corpus, "y");
  EXPECT_EQ(search(q, idx, {}, 1).size(), 1u);
}

TEST(Search, PerIndexStatisticsAreNotMerged) {
  const PositionalIndex small = build({{"a", "c"}, {"z"}}, "small");
  const PositionalIndex big = build({{"a", "c"}, {"z"}, {"z"}, {"z"}, {"z"}, {"z"}}, "big");
  OverlapQuery q;
  q.phrase_a = {"a"};
  q.phrase_b = {"c"};
  const PositionalIndex* idx[] = {&small, &big};
  const auto r = search(q, idx, {}, 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].corpus, "big");  // rarer terms relative to its own N
  const PositionalIndex* only_small[] = {&small};
  EXPECT_NEAR(search(q, only_small, {}, 1)[0].score, r[1].score, 1e-12);
}

TEST(Search, NullIndexIsLookupError) {
  const PositionalIndex* idx[] = {nullptr};
  EXPECT_THROW(search(running_query(), idx, {}, 1), LookupError);
}

TEST(InstanceOverlap, NoMatchMeansZero) {
  const PositionalIndex index = build({{"nothing", "here"}});
  const PositionalIndex* idx[] = {&index};
  const InstanceOverlap o = instance_overlap(running_query(), idx, {});
  EXPECT_EQ(o.max_score, 0.0);
  EXPECT_EQ(o.match_count, 0u);
  EXPECT_FALSE(o.best_match);
}

TEST(InstanceOverlap, JsonRoundTrip) {
  const PositionalIndex index = build({{"couldn't", "lift", "it", "was", "so", "heavy"}, {"x"}, {"y"}});
  const PositionalIndex* idx[] = {&index};
  const InstanceOverlap o = instance_overlap(running_query(), idx, {});
  ASSERT_TRUE(o.best_match);
  const InstanceOverlap back = overlap_from_json(overlap_to_json(o));
  EXPECT_EQ(back.instance_id, o.instance_id);
  EXPECT_EQ(back.max_score, o.max_score);  // shortest round-trip formatting
  EXPECT_EQ(back.match_count, o.match_count);
  ASSERT_TRUE(back.best_match);
  EXPECT_EQ(back.best_match->text, o.best_match->text);
}

// Randomized agreement with the brute-force scorer on small corpora.
TEST(Bm25Oracle, RandomCorporaAgree) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 30; ++round) {
    const size_t vocab = 3 + rng() % 12;
    std::vector<Doc> corpus(1 + rng() % 80);
    for (auto& d : corpus) {
      const size_t len = 1 + rng() % 20;
      for (size_t i = 0; i < len; ++i) d.push_back("t" + std::to_string(rng() % vocab));
    }
    const PositionalIndex index = build(corpus);
    const PositionalIndex* idx[] = {&index};
    for (int qi = 0; qi < 10; ++qi) {
      OverlapQuery q;
      const size_t la = 1 + rng() % 2, lb = 1 + rng() % 2;
      for (size_t i = 0; i < la; ++i) q.phrase_a.push_back("t" + std::to_string(rng() % vocab));
      for (size_t i = 0; i < lb; ++i) q.phrase_b.push_back("t" + std::to_string(rng() % vocab));
      for (size_t i = 0; i < 3; ++i) q.optional_terms.insert("t" + std::to_string(rng() % (vocab + 3)));
      q.window = rng() % 12;
      auto expected = oracle::brute_force_search(corpus, q.phrase_a, q.phrase_b, q.optional_terms, q.window);
      const auto got = search(q, idx, {}, corpus.size());
      ASSERT_EQ(got.size(), expected.size());
      for (const auto& g : got) {
        auto it = std::find_if(expected.begin(), expected.end(), [&](const auto& e) { return e.doc == g.doc_id; });
        ASSERT_NE(it, expected.end());
        EXPECT_NEAR(g.score, it->score, 1e-9);
      }
    }
  }
}
