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

#include <fstream>
#include <map>
#include <set>

#include "overlap/errors.hpp"
#include "overlap/io.hpp"
#include "overlap/pipeline.hpp"
#include "overlap/schema.hpp"
#include "pipeline_audit.hpp"
#include "support.hpp"

using namespace overlap;
using testing_support::fixture;
using testing_support::observed_stages;
using testing_support::read_tsv_pairs;

namespace {

Sentence tagged(const std::string& text, const std::string& id = "t:s0") {
  Sentence s{id, text, tokenize(text)};
  tag_in_place(s.tokens, HeuristicTagger());
  return s;
}

PipelineRun run_fixture(int threads = 0, uint64_t seed = 0) {
  IngestStats ingest;
  const auto docs = read_all_documents(fixture("pipeline/comments.jsonl"), InputFormat::kJsonl, ingest);
  PipelineOptions options;
  options.threads = threads;
  options.seed = seed;
  PipelineRun run = run_pipeline(docs, Lexicon::defaults(), HeuristicTagger(), options);
  run.ingest = ingest;
  return run;
}

}  // namespace

TEST(CleanAndSplit, UrlRemovedBeforeSplitting) {
  CleanStats stats;
  const auto s = clean_and_split(
      "Look at https://example.com/a.b.c?x=1 and tell me. The doctor called the manager because he was late.",
      default_abbreviations(), {}, stats);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].raw, "The doctor called the manager because he was late.");
  EXPECT_EQ(s[0].id, "s1");
  EXPECT_EQ(stats.too_short, 1u);
}

TEST(CleanAndSplit, LengthGate) {
  CleanStats stats;
  std::vector<SkippedCandidate> dropped;
  const auto s = clean_and_split("Yes it is. One two three four five six.", default_abbreviations(), {}, stats,
                                 "d:", &dropped);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].id, "d:s1");
  ASSERT_EQ(dropped.size(), 1u);
  EXPECT_EQ(dropped[0].source_ref, "d:s0");
  EXPECT_EQ(dropped[0].reason, "too_short");
}

TEST(CleanMarkup, Rules) {
  EXPECT_EQ(clean_markup("> quoted line\nplain"), "quoted line plain");
  EXPECT_EQ(clean_markup("a [link text](http://x.y/z) b"), "a link text b");
  EXPECT_EQ(clean_markup("**bold** and ~~gone~~ `code`"), "bold and gone code");
  EXPECT_EQ(clean_markup("see www.example.com now"), "see now");
  EXPECT_EQ(clean_markup("  [deleted] "), "");
  EXPECT_EQ(clean_markup("Tom &amp; Jerry"), "Tom & Jerry");
}

TEST(ConnectiveFilter, Examples) {
  EXPECT_TRUE(connective_filter(tagged("I left because it rained.").tokens));
  EXPECT_FALSE(connective_filter(tagged("I left because it rained, but returned.").tokens));
  EXPECT_FALSE(connective_filter(tagged("I left early.").tokens));
}

TEST(AntecedentFilter, Examples) {
  const auto pass = antecedent_filter(tagged("John called Mark because he was late."));
  ASSERT_TRUE(pass);
  EXPECT_EQ(pass->np1, (TokenSpan{0, 0}));
  EXPECT_EQ(pass->np2, (TokenSpan{2, 2}));
  EXPECT_EQ(pass->connective, (TokenSpan{3, 3}));
  EXPECT_EQ(pass->pronoun, (TokenSpan{4, 4}));
  EXPECT_FALSE(antecedent_filter(tagged("John called Mark and Sue because he was late.")));
  EXPECT_FALSE(antecedent_filter(tagged("John left because he was tired.")));
}

TEST(AntecedentFilter, WithTagger) {
  Sentence raw{"x", "The doctor called the manager because he was late.",
               tokenize("The doctor called the manager because he was late.")};
  const auto c = antecedent_filter(raw, HeuristicTagger());
  ASSERT_TRUE(c);
  EXPECT_EQ(c->np1, (TokenSpan{0, 1}));
  EXPECT_EQ(c->np2, (TokenSpan{3, 4}));
}

TEST(NpChunks, Patterns) {
  const Sentence s = tagged("The old wooden door and John Smith met the big dogs");
  const auto chunks = np_chunks(s.tokens, 0, static_cast<uint32_t>(s.tokens.size()));
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0], (TokenSpan{0, 3}));
  EXPECT_EQ(chunks[1], (TokenSpan{5, 6}));
  EXPECT_EQ(chunks[2], (TokenSpan{8, 10}));
}

TEST(Perturb, RunningExample) {
  const auto cand = antecedent_filter(tagged("The doctor called the manager because he was late.", "ex:s0"));
  ASSERT_TRUE(cand);
  const PerturbedInstance p = perturb(*cand, Lexicon::defaults(), 0);
  const Lexicon& lex = Lexicon::defaults();
  EXPECT_NE(p.name1, p.name2);
  EXPECT_TRUE(lex.male_names.contains(p.name1));
  EXPECT_TRUE(lex.male_names.contains(p.name2));
  EXPECT_EQ(p.pronoun_gender, Gender::kMale);
  EXPECT_EQ(p.perturbed_sentence, p.name1 + " called " + p.name2 + " because he was late.");
  EXPECT_EQ(bracketed(p), "{" + p.name1 + "} called {" + p.name2 + "} because [he] was late.");
  EXPECT_EQ(deperturb(p), "The doctor called the manager because he was late.");
  EXPECT_EQ(p.instance_id.size(), 18u);
  EXPECT_EQ(p.instance_id.substr(0, 2), "kr");
}

TEST(Perturb, FemaleNamesForShe) {
  const auto cand = antecedent_filter(tagged("The nurse visited the farmer because she was late."));
  ASSERT_TRUE(cand);
  const Lexicon& lex = Lexicon::defaults();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const PerturbedInstance p = perturb(*cand, lex, seed);
    EXPECT_TRUE(lex.female_names.contains(p.name1)) << p.name1;
    EXPECT_TRUE(lex.female_names.contains(p.name2)) << p.name2;
    EXPECT_NE(p.name1, p.name2);
  }
}

TEST(Perturb, UngenderedIsSkipped) {
  const auto cand = antecedent_filter(tagged("The parents thanked the teachers because they were kind."));
  ASSERT_TRUE(cand);
  try {
    perturb(*cand, Lexicon::defaults(), 0);
    FAIL();
  } catch (const SkipError& e) {
    EXPECT_EQ(e.kind(), SkipError::Kind::kUngendered);
  }
}

TEST(Perturb, ExhaustedNameList) {
  const auto cand = antecedent_filter(tagged("The doctor called the manager because he was late."));
  Lexicon tiny = Lexicon::defaults();
  tiny.male_names = WordList({"Solo"});
  try {
    perturb(*cand, tiny, 0);
    FAIL();
  } catch (const SkipError& e) {
    EXPECT_EQ(e.kind(), SkipError::Kind::kNameListExhausted);
  }
}

TEST(Perturb, PossessiveCliticStaysOutsideName) {
  const auto cand = antecedent_filter(tagged("The doctor visited Smith's because he was hungry."));
  ASSERT_TRUE(cand);
  const PerturbedInstance p = perturb(*cand, Lexicon::defaults(), 1);
  EXPECT_EQ(p.perturbed_sentence, p.name1 + " visited " + p.name2 + "'s because he was hungry.");
  EXPECT_EQ(deperturb(p), "The doctor visited Smith's because he was hungry.");
}

TEST(Perturb, SeedIsPerInstanceAndGlobal) {
  const auto a = antecedent_filter(tagged("The doctor called the manager because he was late.", "a:s0"));
  const auto b = antecedent_filter(tagged("The doctor called the manager because he was late.", "b:s0"));
  const auto pa = perturb(*a, Lexicon::defaults(), 0);
  EXPECT_EQ(perturb(*a, Lexicon::defaults(), 0).perturbed_sentence, pa.perturbed_sentence);
  bool differs_by_ref = false, differs_by_seed = false;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    differs_by_ref |= perturb(*a, Lexicon::defaults(), seed).name1 != perturb(*b, Lexicon::defaults(), seed).name1;
    differs_by_seed |= perturb(*a, Lexicon::defaults(), seed).name1 != pa.name1;
  }
  EXPECT_TRUE(differs_by_ref);
  EXPECT_TRUE(differs_by_seed);
  EXPECT_EQ(instance_seed("a:s0", 7), instance_seed("a:s0", 7));
}

TEST(MergeAnnotations, Examples) {
  const std::vector<AnnotationRecord> records = {
      {"a", {1, 1, 1, 1, 2}}, {"b", {1, 1, 1, 2, 2}}, {"c", {2, 2, 2, 2, 2}}};
  const auto merged = merge_annotations(records);
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[0].gold, 1);
  EXPECT_FALSE(merged[1].gold);
  EXPECT_EQ(merged[1].reason, "no_majority");
  EXPECT_EQ(merged[2].gold, 2);
}

TEST(MergeAnnotations, WrongLabelCountIsDataError) {
  const std::vector<AnnotationRecord> four = {{"a", {1, 1, 1, 1}}};
  EXPECT_THROW(merge_annotations(four), DataError);
  const std::vector<AnnotationRecord> six = {{"a", {1, 1, 1, 1, 1, 1}}};
  EXPECT_THROW(merge_annotations(six), DataError);
}

TEST(ParseLabels, Validation) {
  EXPECT_THROW(parse_labels("a\tx\t3\n"), DataError);
  EXPECT_THROW(parse_labels("a\tx\n"), DataError);
  EXPECT_THROW(parse_labels("a\tx\t1\na\tx\t2\n"), DataError);
  const auto r = parse_labels("instance_id\tannotator_id\tlabel\nb\tx\t1\na\tx\t2\nb\ty\t2\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].instance_id, "b");
  EXPECT_EQ(r[0].labels, (std::vector<int>{1, 2}));
}

// The fixture dump: every sentence leaves at the stage assigned by hand.
TEST(PipelineFixture, StagesMatchHandAudit) {
  const PipelineRun run = run_fixture();
  const auto expected = read_tsv_pairs(fixture("pipeline/expected_stages.tsv"));
  auto observed = observed_stages(run);
  EXPECT_EQ(run.ingest.documents, 184u);
  EXPECT_EQ(run.ingest.skipped_records, 16u);
  EXPECT_EQ(run.clean.empty_documents, 8u);
  ASSERT_EQ(observed.size(), expected.size());
  for (const auto& [ref, stage] : expected) {
    auto it = observed.find(ref);
    ASSERT_NE(it, observed.end()) << ref;
    EXPECT_EQ(it->second, stage) << ref;
  }
}

TEST(PipelineFixture, FunnelIsNonIncreasing) {
  const FunnelCounts f = run_fixture().funnel();
  EXPECT_GE(f.split, f.length_ok);
  EXPECT_GE(f.length_ok, f.connective);
  EXPECT_GE(f.connective, f.antecedent);
  EXPECT_GE(f.antecedent, f.perturbed);
  EXPECT_GT(f.perturbed, 0u);
}

TEST(PipelineFixture, PerturbationRoundTripAndTokenPreservation) {
  const PipelineRun run = run_fixture();
  const Lexicon& lex = Lexicon::defaults();
  for (const PerturbedInstance& p : run.perturbed) {
    const Sentence& orig = p.original.sentence;
    EXPECT_EQ(deperturb(p), orig.raw);
    const auto& names = p.pronoun_gender == Gender::kMale ? lex.male_names : lex.female_names;
    EXPECT_TRUE(names.contains(p.name1) && names.contains(p.name2)) << p.perturbed_sentence;
    EXPECT_NE(p.name1, p.name2);
    // Tokens outside the noun phrases are untouched.
    std::vector<std::string> outside_orig, outside_new;
    for (uint32_t i = 0; i < orig.tokens.size(); ++i) {
      if (!p.original.np1.contains(i) && !p.original.np2.contains(i)) outside_orig.push_back(orig.tokens[i].surface);
    }
    for (const Token& t : tokenize(p.perturbed_sentence)) {
      if (t.span.start >= p.name1_span.start && t.span.end <= p.name1_span.end) continue;
      if (t.span.start >= p.name2_span.start && t.span.end <= p.name2_span.end) continue;
      outside_new.push_back(t.surface);
    }
    EXPECT_EQ(outside_orig, outside_new) << p.perturbed_sentence;
  }
}

TEST(PipelineFixture, MergeKeepsStrongMajorityOnly) {
  const PipelineRun run = run_fixture();
  const auto records = read_labels(fixture("pipeline/labels.tsv"));
  std::set<std::string> perturbed_ids;
  for (const auto& p : run.perturbed) perturbed_ids.insert(p.instance_id);
  for (const auto& r : records) EXPECT_TRUE(perturbed_ids.contains(r.instance_id)) << r.instance_id;
  EXPECT_EQ(records.size(), perturbed_ids.size());
  std::map<std::string, std::string> kept;
  for (const auto& m : merge_annotations(records)) {
    if (m.gold) kept[m.instance_id] = std::to_string(*m.gold);
  }
  EXPECT_EQ(kept, read_tsv_pairs(fixture("pipeline/expected_kept.tsv")));
}

TEST(PipelineFixture, EmittedInstancesAreParseable) {
  const PipelineRun run = run_fixture();
  HeuristicTagger tagger;
  for (const auto& p : run.perturbed) {
    const RawInstance raw = instance_from_json(instance_to_json(to_raw_instance(p, 1)));
    EXPECT_EQ(raw.sentence.substr(raw.candidate1.start, raw.candidate1.end - raw.candidate1.start), p.name1);
    EXPECT_EQ(raw.sentence.substr(raw.candidate2.start, raw.candidate2.end - raw.candidate2.start), p.name2);
    EXPECT_NO_THROW(parse_instance(raw, tagger)) << p.perturbed_sentence;
  }
}

TEST(PipelineFixture, ThreadCountDoesNotChangeOutput) {
  const PipelineRun a = run_fixture(1, 42), b = run_fixture(4, 42);
  ASSERT_EQ(a.perturbed.size(), b.perturbed.size());
  for (size_t i = 0; i < a.perturbed.size(); ++i) {
    EXPECT_EQ(perturbed_to_json(a.perturbed[i]), perturbed_to_json(b.perturbed[i]));
  }
}
