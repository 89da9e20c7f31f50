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
#include <random>
#include <sstream>

#include "overlap/errors.hpp"
#include "overlap/io.hpp"
#include "overlap/text.hpp"
#include "support.hpp"

using namespace overlap;
using testing_support::fixture;

namespace {

std::vector<std::string> norms(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.norm);
  return out;
}

}  // namespace

TEST(Tokenize, KeepsContractionsWhole) {
  EXPECT_EQ(norms("The man couldn't lift his son."),
            (std::vector<std::string>{"the", "man", "couldn't", "lift", "his", "son"}));
}

TEST(Tokenize, FoldsCurlyApostrophe) {
  EXPECT_EQ(norms("couldn\xE2\x80\x99t lift"), (std::vector<std::string>{"couldn't", "lift"}));
}

TEST(Tokenize, SplitsOnHardSeparatorsButKeepsDigitGroups) {
  EXPECT_EQ(norms("ones, so we (punished) them; 1,000 sheep"),
            (std::vector<std::string>{"ones", "so", "we", "punished", "them", "1,000", "sheep"}));
}

TEST(Tokenize, SpansPointBackIntoText) {
  const std::string text = "  \"Hello,\" said   Sam. ";
  for (const Token& t : tokenize(text)) {
    EXPECT_EQ(text.substr(t.span.start, t.span.end - t.span.start), t.surface);
  }
}

TEST(Tokenize, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ... !!! -- ").empty());
}

TEST(Tokenize, NormsAgreeWithTokens) {
  const std::string text = "Tom couldn't lift Melissa, and she was so heavy!";
  EXPECT_EQ(tokenize_norms(text), norms(text));
}

// Joining surfaces with single spaces and re-tokenizing is a fixed point.
TEST(TokenizeProperty, RoundTripIsIdempotent) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pieces = {"the", "Man", "couldn't", ",", ".", "(", ")", "\"", "so",
                                           "heavy", "1,000", "3.5", "e.g.", "it's", "--", "!", "O'Neil",
                                           "\xE2\x80\x9C", "caf\xC3\xA9", "\xE2\x80\x94"};
  for (int round = 0; round < 500; ++round) {
    std::string text;
    const int n = static_cast<int>(rng() % 15);
    for (int i = 0; i < n; ++i) {
      text += pieces[rng() % pieces.size()];
      text += (rng() % 3 == 0) ? "" : " ";
    }
    std::vector<Token> first = tokenize(text);
    std::string joined;
    for (const Token& t : first) joined += t.surface + " ";
    std::vector<Token> second = tokenize(joined);
    ASSERT_EQ(first.size(), second.size()) << text;
    for (size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].surface, second[i].surface) << text;
      EXPECT_EQ(first[i].norm, second[i].norm) << text;
    }
  }
}

TEST(SplitSentences, ParagraphFixtureMatchesHandSplit) {
  const auto sentences = split_sentences(io::read_file(fixture("split_paragraphs.txt")));
  std::ifstream expected(fixture("split_paragraphs.expected"));
  std::vector<std::string> want;
  for (std::string line; std::getline(expected, line);) want.push_back(line);
  ASSERT_EQ(sentences.size(), want.size());
  for (size_t i = 0; i < want.size(); ++i) EXPECT_EQ(sentences[i].raw, want[i]);
}

TEST(SplitSentences, IdsUsePrefixAndOrdinal) {
  const auto s = split_sentences("One two. Three four.", default_abbreviations(), "doc:s");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].id, "doc:s0");
  EXPECT_EQ(s[1].id, "doc:s1");
}

TEST(SplitSentences, Deterministic) {
  const std::string text = io::read_file(fixture("split_paragraphs.txt"));
  const auto a = split_sentences(text);
  const auto b = split_sentences(text);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].raw, b[i].raw);
}

TEST(Tagger, HandTaggedGoldAccuracyAtLeastNinetyPercent) {
  std::ifstream in(fixture("tagger_gold.tsv"));
  ASSERT_TRUE(in);
  HeuristicTagger tagger;
  size_t correct = 0, total = 0, sentences = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    ++sentences;
    const auto tab = line.find('\t');
    const auto tokens = tag(tokenize(line.substr(0, tab)), tagger);
    std::istringstream gold(line.substr(tab + 1));
    std::vector<std::string> tags;
    for (std::string t; gold >> t;) tags.push_back(t);
    ASSERT_EQ(tokens.size(), tags.size()) << line;
    for (size_t i = 0; i < tags.size(); ++i) {
      total += 1;
      correct += tag_name(tokens[i].tag) == tags[i] ? 1 : 0;
    }
  }
  EXPECT_EQ(sentences, 20u);
  const double accuracy = static_cast<double>(correct) / static_cast<double>(total);
  EXPECT_GE(accuracy, 0.90) << correct << "/" << total;
}

TEST(Tagger, IntensifierSoIsNotAConnective) {
  HeuristicTagger tagger;
  auto tokens = tag(tokenize("he was so heavy"), tagger);
  EXPECT_EQ(tokens[2].tag, Tag::kOther);
  tokens = tag(tokenize("we left early, so we missed it"), tagger);
  EXPECT_EQ(tokens[3].tag, Tag::kConn);
}

TEST(Tagger, ParticipleAfterCopulaAndDegreeWordIsAdjective) {
  HeuristicTagger tagger;
  auto tokens = tag(tokenize("he was so tired"), tagger);
  EXPECT_EQ(tokens[3].tag, Tag::kAdj);
  tokens = tag(tokenize("she was very excited"), tagger);
  EXPECT_EQ(tokens[3].tag, Tag::kAdj);
  tokens = tag(tokenize("he really wanted it"), tagger);
  EXPECT_EQ(tokens[2].tag, Tag::kVerb);
}

TEST(Tagger, FunctionTaggerLengthMismatchIsDataError) {
  FunctionTagger broken([](std::span<const Token>) { return std::vector<Tag>{Tag::kNoun}; });
  auto tokens = tokenize("two tokens");
  EXPECT_THROW(tag_in_place(tokens, broken), DataError);
}

TEST(Tags, NamesRoundTrip) {
  for (Tag t : {Tag::kNoun, Tag::kPropn, Tag::kVerb, Tag::kPron, Tag::kDet, Tag::kAdj, Tag::kConn,
                Tag::kOther}) {
    EXPECT_EQ(parse_tag(tag_name(t)), t);
  }
}

TEST(Pronouns, GenderAndPerson) {
  EXPECT_EQ(pronoun_gender("he"), 1);
  EXPECT_EQ(pronoun_gender("hers"), -1);
  EXPECT_EQ(pronoun_gender("they"), 0);
  EXPECT_TRUE(is_third_person_pronoun("them"));
  EXPECT_FALSE(is_third_person_pronoun("we"));
}

TEST(Lexicon, DefaultsAreLoaded) {
  const Lexicon& lex = Lexicon::defaults();
  EXPECT_EQ(lex.connectives.size(), 12u);
  for (const char* c : {"because", "so", "but", "although", "though", "since", "while", "and", "until",
                        "before", "after", "if"}) {
    EXPECT_TRUE(lex.connectives.contains(c)) << c;
  }
  EXPECT_GE(lex.male_names.size(), 150u);
  EXPECT_GE(lex.female_names.size(), 150u);
  EXPECT_TRUE(lex.abbreviations.contains("dr"));
}

TEST(Lexicon, MissingFileIsDataError) {
  EXPECT_THROW(WordList::load("/nonexistent/words.txt"), DataError);
}
