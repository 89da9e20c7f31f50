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

#include "overlap/pipeline.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <omp.h>

#include "json.hpp"
#include "overlap/errors.hpp"
#include "overlap/io.hpp"

namespace overlap {

using nlohmann::ordered_json;

namespace {

Sentence whole_sentence(std::string_view text, std::string id) {
  size_t a = text.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return Sentence{std::move(id), {}, {}};
  size_t b = text.find_last_not_of(" \t\r\n");
  Sentence s{std::move(id), std::string(text.substr(a, b - a + 1)), {}};
  s.tokens = tokenize(s.raw);
  return s;
}

CharSpan char_span(const Sentence& s, TokenSpan span) {
  return {s.tokens[span.first].span.start, s.tokens[span.last].span.end};
}

// A trailing possessive clitic stays outside the substituted noun phrase.
CharSpan np_char_span(const Sentence& s, TokenSpan span) {
  CharSpan c = char_span(s, span);
  std::string_view text = std::string_view(s.raw).substr(c.start, c.end - c.start);
  if (text.size() > 2 && (text.ends_with("'s") || text.ends_with("'S"))) {
    c.end -= 2;
  } else if (text.size() > 4 && text.ends_with("\xE2\x80\x99s")) {
    c.end -= 4;
  }
  return c;
}

std::string capitalized(std::string name) {
  if (!name.empty() && name[0] >= 'a' && name[0] <= 'z') name[0] = static_cast<char>(name[0] - 32);
  return name;
}

std::string lowered(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

ordered_json span_json(TokenSpan span) { return ordered_json::array({span.first, span.last}); }

}  // namespace

std::vector<Sentence> clean_and_split(std::string_view raw_document, const WordList& abbreviations,
                                      const PipelineOptions& options, CleanStats& stats,
                                      std::string_view id_prefix,
                                      std::vector<SkippedCandidate>* length_dropped) {
  std::string cleaned = clean_markup(raw_document);
  if (cleaned.empty()) {
    ++stats.empty_documents;
    return {};
  }
  std::vector<Sentence> split = split_sentences(cleaned, abbreviations, std::string(id_prefix) + "s");
  std::vector<Sentence> kept;
  stats.sentences += split.size();
  for (Sentence& s : split) {
    if (s.tokens.size() < options.min_tokens) {
      ++stats.too_short;
      if (length_dropped) length_dropped->push_back({s.id, "too_short"});
      continue;
    }
    if (s.tokens.size() > options.max_tokens) {
      ++stats.too_long;
      if (length_dropped) length_dropped->push_back({s.id, "too_long"});
      continue;
    }
    kept.push_back(std::move(s));
  }
  return kept;
}

bool connective_filter(std::span<const Token> tagged) {
  return std::count_if(tagged.begin(), tagged.end(),
                       [](const Token& t) { return t.tag == Tag::kConn; }) == 1;
}

std::vector<TokenSpan> np_chunks(std::span<const Token> tagged, uint32_t begin, uint32_t end) {
  std::vector<TokenSpan> chunks;
  end = std::min<uint32_t>(end, static_cast<uint32_t>(tagged.size()));
  uint32_t i = begin;
  while (i < end) {
    Tag t = tagged[i].tag;
    if (t == Tag::kPropn) {
      uint32_t j = i;
      while (j + 1 < end && tagged[j + 1].tag == Tag::kPropn) ++j;
      chunks.push_back({i, j});
      i = j + 1;
      continue;
    }
    if (t == Tag::kDet || t == Tag::kAdj || t == Tag::kNoun) {
      uint32_t j = i;
      if (tagged[j].tag == Tag::kDet) ++j;
      while (j < end && tagged[j].tag == Tag::kAdj) ++j;
      if (j < end && tagged[j].tag == Tag::kNoun) {
        while (j + 1 < end && tagged[j + 1].tag == Tag::kNoun) ++j;
        chunks.push_back({i, j});
        i = j + 1;
        continue;
      }
    }
    ++i;
  }
  return chunks;
}

std::optional<CandidateSentence> antecedent_filter(const Sentence& sentence) {
  // The connective is the one closest before the first third-person pronoun
  // that follows any connective.
  const auto& tokens = sentence.tokens;
  std::optional<uint32_t> conn;
  for (uint32_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].tag == Tag::kConn) {
      conn = i;
    } else if (conn && is_third_person_pronoun(tokens[i].norm)) {
      std::vector<TokenSpan> nps = np_chunks(tokens, 0, *conn);
      if (nps.size() != 2) return std::nullopt;
      return CandidateSentence{sentence, {*conn, *conn}, nps[0], nps[1], {i, i}, sentence.id};
    }
  }
  return std::nullopt;
}

std::optional<CandidateSentence> antecedent_filter(const Sentence& sentence, const Tagger& tagger) {
  Sentence tagged = sentence;
  tag_in_place(tagged.tokens, tagger);
  return antecedent_filter(tagged);
}

std::string_view gender_name(Gender gender) {
  return gender == Gender::kMale ? "male" : "female";
}

std::string instance_id_for(std::string_view source_ref) {
  return fmt::format("kr{:016x}", io::fnv1a64(source_ref));
}

uint64_t instance_seed(std::string_view source_ref, uint64_t seed) {
  uint64_t h = io::fnv1a64(source_ref);
  return h ^ (seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

PerturbedInstance perturb(const CandidateSentence& cand, const Lexicon& names, uint64_t seed) {
  const Sentence& s = cand.sentence;
  int g = pronoun_gender(s.tokens[cand.pronoun.first].norm);
  if (g == 0) {
    throw SkipError(SkipError::Kind::kUngendered,
                    "pronoun '" + s.tokens[cand.pronoun.first].surface + "' is not gendered");
  }
  const Gender gender = g > 0 ? Gender::kMale : Gender::kFemale;
  const WordList& list = gender == Gender::kMale ? names.male_names : names.female_names;

  // Names already present in the sentence would make the substitution ambiguous.
  std::unordered_set<std::string> present;
  for (const Token& t : s.tokens) present.insert(t.norm);
  std::vector<const std::string*> eligible;
  for (const std::string& name : list.words()) {
    if (!present.contains(lowered(name))) eligible.push_back(&name);
  }
  if (eligible.size() < 2) {
    throw SkipError(SkipError::Kind::kNameListExhausted,
                    fmt::format("fewer than two eligible {} names", gender_name(gender)));
  }
  std::mt19937_64 rng(instance_seed(cand.source_ref, seed));
  const uint64_t n = eligible.size();
  uint64_t i1 = rng() % n;
  uint64_t i2 = rng() % (n - 1);
  if (i2 >= i1) ++i2;

  PerturbedInstance out;
  out.original = cand;
  out.name1 = capitalized(*eligible[i1]);
  out.name2 = capitalized(*eligible[i2]);
  out.pronoun_gender = gender;
  out.instance_id = instance_id_for(cand.source_ref);

  const CharSpan a = np_char_span(s, cand.np1);
  const CharSpan b = np_char_span(s, cand.np2);
  const CharSpan p = char_span(s, cand.pronoun);
  const std::string_view raw = s.raw;
  std::string text;
  text.append(raw.substr(0, a.start));
  out.name1_span = {text.size(), text.size() + out.name1.size()};
  text.append(out.name1);
  text.append(raw.substr(a.end, b.start - a.end));
  out.name2_span = {text.size(), text.size() + out.name2.size()};
  text.append(out.name2);
  const size_t shift = text.size() - b.end;
  text.append(raw.substr(b.end));
  out.pronoun_span = {p.start + shift, p.end + shift};
  out.perturbed_sentence = std::move(text);
  return out;
}

std::string deperturb(const PerturbedInstance& inst) {
  const Sentence& s = inst.original.sentence;
  const CharSpan a = np_char_span(s, inst.original.np1);
  const CharSpan b = np_char_span(s, inst.original.np2);
  const std::string_view p = inst.perturbed_sentence;
  std::string out;
  out.append(p.substr(0, inst.name1_span.start));
  out.append(std::string_view(s.raw).substr(a.start, a.end - a.start));
  out.append(p.substr(inst.name1_span.end, inst.name2_span.start - inst.name1_span.end));
  out.append(std::string_view(s.raw).substr(b.start, b.end - b.start));
  out.append(p.substr(inst.name2_span.end));
  return out;
}

std::string bracketed(const PerturbedInstance& inst) {
  struct Mark {
    size_t pos;
    char ch;
  };
  std::array<Mark, 6> marks{{{inst.name1_span.start, '{'}, {inst.name1_span.end, '}'},
                             {inst.name2_span.start, '{'}, {inst.name2_span.end, '}'},
                             {inst.pronoun_span.start, '['}, {inst.pronoun_span.end, ']'}}};
  std::stable_sort(marks.begin(), marks.end(),
                   [](const Mark& x, const Mark& y) { return x.pos < y.pos; });
  std::string out;
  size_t at = 0;
  for (const Mark& m : marks) {
    out.append(inst.perturbed_sentence, at, m.pos - at);
    out.push_back(m.ch);
    at = m.pos;
  }
  out.append(inst.perturbed_sentence, at);
  return out;
}

std::vector<AnnotationRecord> parse_labels(std::string_view content) {
  std::vector<AnnotationRecord> records;
  std::unordered_map<std::string, size_t> slot;
  std::unordered_set<std::string> seen_pairs;
  std::istringstream in{std::string(content)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, '\t')) fields.push_back(field);
    if (lineno == 1 && !fields.empty() && fields[0] == "instance_id") continue;
    if (fields.size() != 3) {
      throw DataError(fmt::format("labels line {}: expected 3 tab-separated fields", lineno));
    }
    if (fields[2] != "1" && fields[2] != "2") {
      throw DataError(fmt::format("labels line {}: label must be 1 or 2, got '{}'", lineno, fields[2]));
    }
    if (!seen_pairs.insert(fields[0] + '\t' + fields[1]).second) {
      throw DataError(fmt::format("labels line {}: annotator '{}' labelled '{}' twice", lineno,
                                  fields[1], fields[0]));
    }
    auto [it, inserted] = slot.try_emplace(fields[0], records.size());
    if (inserted) records.push_back({fields[0], {}});
    records[it->second].labels.push_back(fields[2] == "1" ? 1 : 2);
  }
  return records;
}

std::vector<AnnotationRecord> read_labels(const std::filesystem::path& path) {
  return parse_labels(io::read_file(path));
}

std::vector<MergeOutcome> merge_annotations(std::span<const AnnotationRecord> records) {
  std::vector<MergeOutcome> out;
  out.reserve(records.size());
  for (const AnnotationRecord& r : records) {
    if (r.labels.size() != kAnnotatorsPerInstance) {
      throw DataError(fmt::format("instance '{}' has {} labels, expected {}", r.instance_id,
                                  r.labels.size(), kAnnotatorsPerInstance));
    }
    size_t ones = 0;
    for (int label : r.labels) {
      if (label != 1 && label != 2) {
        throw DataError(fmt::format("instance '{}' has label {}, expected 1 or 2", r.instance_id, label));
      }
      ones += label == 1;
    }
    const size_t twos = r.labels.size() - ones;
    if (ones >= kMajorityVotes) {
      out.push_back({r.instance_id, 1, "kept"});
    } else if (twos >= kMajorityVotes) {
      out.push_back({r.instance_id, 2, "kept"});
    } else {
      out.push_back({r.instance_id, std::nullopt, "no_majority"});
    }
  }
  return out;
}

RawInstance to_raw_instance(const PerturbedInstance& inst, int answer) {
  if (answer != 1 && answer != 2) throw DataError("answer must be 1 or 2");
  return RawInstance{inst.instance_id, inst.perturbed_sentence, inst.name1_span,
                     inst.name2_span,  inst.pronoun_span,       answer};
}

FunnelCounts PipelineRun::funnel() const {
  FunnelCounts f;
  f.split = clean.sentences;
  f.length_ok = sentences.size();
  f.connective = connective_pass.size();
  f.antecedent = candidates.size();
  f.perturbed = perturbed.size();
  return f;
}

std::string FunnelCounts::to_csv() const {
  std::string out = "stage,count\n";
  out += fmt::format("split,{}\nlength_ok,{}\nsingle_connective,{}\ntwo_antecedents,{}\nperturbed,{}\n",
                     split, length_ok, connective, antecedent, perturbed);
  if (annotated) out += fmt::format("annotated,{}\n", *annotated);
  if (kept) out += fmt::format("kept,{}\n", *kept);
  return out;
}

namespace {

struct DocumentResult {
  CleanStats clean;
  std::vector<Sentence> sentences;
  std::vector<size_t> connective_pass;
  std::vector<CandidateSentence> candidates;
  std::vector<PerturbedInstance> perturbed;
  std::vector<SkippedCandidate> length_dropped;
  std::vector<SkippedCandidate> skipped;
};

DocumentResult process_document(const RawDocument& doc, const Lexicon& lexicon, const Tagger& tagger,
                                const PipelineOptions& options) {
  DocumentResult r;
  if (doc.presplit) {
    Sentence s = whole_sentence(clean_markup(doc.text), doc.locator);
    ++r.clean.sentences;
    if (s.tokens.size() < options.min_tokens) {
      ++r.clean.too_short;
      r.length_dropped.push_back({s.id, "too_short"});
    } else if (s.tokens.size() > options.max_tokens) {
      ++r.clean.too_long;
      r.length_dropped.push_back({s.id, "too_long"});
    } else {
      r.sentences.push_back(std::move(s));
    }
  } else {
    r.sentences = clean_and_split(doc.text, lexicon.abbreviations, options, r.clean, doc.locator + ":",
                                  &r.length_dropped);
  }
  for (size_t i = 0; i < r.sentences.size(); ++i) {
    Sentence& s = r.sentences[i];
    tag_in_place(s.tokens, tagger);
    if (!connective_filter(s.tokens)) continue;
    r.connective_pass.push_back(i);
    std::optional<CandidateSentence> cand = antecedent_filter(s);
    if (!cand) continue;
    try {
      r.perturbed.push_back(perturb(*cand, lexicon, options.seed));
    } catch (const SkipError& e) {
      r.skipped.push_back({cand->source_ref, e.kind() == SkipError::Kind::kUngendered
                                                 ? "ungendered"
                                                 : "name_list_exhausted"});
    }
    r.candidates.push_back(std::move(*cand));
  }
  return r;
}

}  // namespace

PipelineRun run_pipeline(std::span<const RawDocument> documents, const Lexicon& lexicon,
                         const Tagger& tagger, const PipelineOptions& options) {
  std::vector<DocumentResult> results(documents.size());
  std::vector<std::string> errors(documents.size());
  const auto n = static_cast<std::ptrdiff_t>(documents.size());
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[i] = process_document(documents[i], lexicon, tagger, options);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw DataError(documents[i].locator + ": " + errors[i]);
  }

  PipelineRun run;
  run.ingest.documents = documents.size();
  for (DocumentResult& r : results) {
    run.clean.sentences += r.clean.sentences;
    run.clean.too_short += r.clean.too_short;
    run.clean.too_long += r.clean.too_long;
    run.clean.empty_documents += r.clean.empty_documents;
    const size_t base = run.sentences.size();
    for (size_t i : r.connective_pass) run.connective_pass.push_back(base + i);
    std::move(r.sentences.begin(), r.sentences.end(), std::back_inserter(run.sentences));
    std::move(r.candidates.begin(), r.candidates.end(), std::back_inserter(run.candidates));
    std::move(r.perturbed.begin(), r.perturbed.end(), std::back_inserter(run.perturbed));
    std::move(r.length_dropped.begin(), r.length_dropped.end(), std::back_inserter(run.length_dropped));
    std::move(r.skipped.begin(), r.skipped.end(), std::back_inserter(run.skipped));
  }
  return run;
}

std::string sentence_to_json(const Sentence& s) {
  ordered_json j;
  j["id"] = s.id;
  j["text"] = s.raw;
  ordered_json tokens = ordered_json::array();
  ordered_json tags = ordered_json::array();
  for (const Token& t : s.tokens) {
    tokens.push_back(t.norm);
    tags.push_back(std::string(tag_name(t.tag)));
  }
  j["tokens"] = std::move(tokens);
  j["tags"] = std::move(tags);
  return j.dump();
}

std::string candidate_to_json(const CandidateSentence& c) {
  const Sentence& s = c.sentence;
  auto text_of = [&](TokenSpan span) {
    CharSpan cs = char_span(s, span);
    return s.raw.substr(cs.start, cs.end - cs.start);
  };
  ordered_json j;
  j["source_ref"] = c.source_ref;
  j["text"] = s.raw;
  j["np1"] = span_json(c.np1);
  j["np2"] = span_json(c.np2);
  j["connective"] = span_json(c.connective);
  j["pronoun"] = span_json(c.pronoun);
  j["np1_text"] = text_of(c.np1);
  j["np2_text"] = text_of(c.np2);
  j["connective_text"] = text_of(c.connective);
  j["pronoun_text"] = text_of(c.pronoun);
  return j.dump();
}

std::string perturbed_to_json(const PerturbedInstance& p) {
  ordered_json j;
  j["instance_id"] = p.instance_id;
  j["source_ref"] = p.original.source_ref;
  j["original"] = p.original.sentence.raw;
  j["perturbed"] = p.perturbed_sentence;
  j["name1"] = p.name1;
  j["name2"] = p.name2;
  j["pronoun_gender"] = std::string(gender_name(p.pronoun_gender));
  j["bracketed"] = bracketed(p);
  return j.dump();
}

}  // namespace overlap
