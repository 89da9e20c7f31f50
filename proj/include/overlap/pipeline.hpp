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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "overlap/ingest.hpp"
#include "overlap/lexicon.hpp"
#include "overlap/schema.hpp"
#include "overlap/text.hpp"

namespace overlap {

struct PipelineOptions {
  size_t min_tokens = 6;
  size_t max_tokens = 60;
  uint64_t seed = 0;
  int threads = 0;  // 0: OpenMP default
};

// A sentence or candidate that left the pipeline, with the reason code.
struct SkippedCandidate {
  std::string source_ref;
  std::string reason;
};

struct CleanStats {
  size_t sentences = 0;  // produced by the splitter
  size_t too_short = 0;
  size_t too_long = 0;
  size_t empty_documents = 0;
};

// Cleans markup, splits into sentences and applies the length gate.
// Sentence ids are "<id_prefix>s<k>", k being the ordinal before gating.
std::vector<Sentence> clean_and_split(std::string_view raw_document, const WordList& abbreviations,
                                      const PipelineOptions& options, CleanStats& stats,
                                      std::string_view id_prefix = "",
                                      std::vector<SkippedCandidate>* length_dropped = nullptr);

// Passes iff exactly one token is tagged as a connective.
bool connective_filter(std::span<const Token> tagged);

// Noun-phrase chunks over tagged tokens: DET? ADJ* NOUN+ | PROPN+.
std::vector<TokenSpan> np_chunks(std::span<const Token> tagged, uint32_t begin, uint32_t end);

struct CandidateSentence {
  Sentence sentence;  // tokens carry tags
  TokenSpan connective;
  TokenSpan np1;
  TokenSpan np2;
  TokenSpan pronoun;  // first third-person pronoun after a connective
  std::string source_ref;
};

// `sentence.tokens` must already be tagged.
std::optional<CandidateSentence> antecedent_filter(const Sentence& sentence);
std::optional<CandidateSentence> antecedent_filter(const Sentence& sentence, const Tagger& tagger);

enum class Gender { kMale, kFemale };
std::string_view gender_name(Gender gender);

struct PerturbedInstance {
  CandidateSentence original;
  std::string perturbed_sentence;
  std::string name1;
  std::string name2;
  Gender pronoun_gender = Gender::kMale;
  std::string instance_id;
  CharSpan name1_span;  // offsets into perturbed_sentence
  CharSpan name2_span;
  CharSpan pronoun_span;
};

// "kr" followed by the 16-digit hex FNV-1a hash of the source reference.
std::string instance_id_for(std::string_view source_ref);

// Per-instance generator seed: hash of the source reference mixed with the
// global seed, so outputs do not depend on processing order.
uint64_t instance_seed(std::string_view source_ref, uint64_t seed);

// Throws SkipError(kUngendered) for they/it pronouns and
// SkipError(kNameListExhausted) when fewer than two eligible names remain.
PerturbedInstance perturb(const CandidateSentence& cand, const Lexicon& names, uint64_t seed);

// Substitutes the original noun phrases back into the perturbed sentence.
std::string deperturb(const PerturbedInstance& inst);

// "{Steven} called {Gregory} because [he] was late."
std::string bracketed(const PerturbedInstance& inst);

struct AnnotationRecord {
  std::string instance_id;
  std::vector<int> labels;
};

// Tab-separated (instance_id, annotator_id, label) rows grouped by instance
// in first-appearance order. Throws DataError on malformed rows or labels
// outside {1,2}.
std::vector<AnnotationRecord> read_labels(const std::filesystem::path& path);
std::vector<AnnotationRecord> parse_labels(std::string_view content);

struct MergeOutcome {
  std::string instance_id;
  std::optional<int> gold;
  std::string reason;  // "kept" or "no_majority"
};

inline constexpr size_t kAnnotatorsPerInstance = 5;
inline constexpr size_t kMajorityVotes = 4;

// Throws DataError for records without exactly five labels.
std::vector<MergeOutcome> merge_annotations(std::span<const AnnotationRecord> records);

RawInstance to_raw_instance(const PerturbedInstance& inst, int answer);

// Stage output counts, non-increasing from top to bottom.
struct FunnelCounts {
  size_t split = 0;       // sentences produced by the splitter
  size_t length_ok = 0;   // within the token-length gate
  size_t connective = 0;  // single connective
  size_t antecedent = 0;  // exactly two NPs before it, pronoun after
  size_t perturbed = 0;
  std::optional<size_t> annotated;  // perturbed instances with labels
  std::optional<size_t> kept;       // strong majority

  std::string to_csv() const;
};

struct PipelineRun {
  IngestStats ingest;
  CleanStats clean;
  std::vector<Sentence> sentences;  // tagged, length-gated
  std::vector<size_t> connective_pass;  // indexes into sentences
  std::vector<CandidateSentence> candidates;
  std::vector<PerturbedInstance> perturbed;
  std::vector<SkippedCandidate> length_dropped;  // "too_short" / "too_long"
  std::vector<SkippedCandidate> skipped;         // failed perturbation

  FunnelCounts funnel() const;
};

// Runs cleaning through perturbation over already-read documents. Per-document
// work fans out across threads; results are merged in input order.
PipelineRun run_pipeline(std::span<const RawDocument> documents, const Lexicon& lexicon,
                         const Tagger& tagger, const PipelineOptions& options);

// Line-delimited JSON for the intermediate stage files.
std::string sentence_to_json(const Sentence& s);
std::string candidate_to_json(const CandidateSentence& c);
std::string perturbed_to_json(const PerturbedInstance& p);

}  // namespace overlap
