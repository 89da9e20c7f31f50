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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "overlap/lexicon.hpp"
#include "overlap/text.hpp"

namespace overlap {

inline constexpr int kIndexFormatVersion = 1;

struct SourceRef {
  std::string corpus;
  std::string locator;
};

struct DocRecord {
  uint32_t doc_id = 0;
  SourceRef source;
  uint32_t length = 0;  // token count
  std::string text;
};

struct Posting {
  uint32_t doc_id = 0;
  std::vector<uint32_t> positions;
};

struct PostingList {
  std::string term;
  std::vector<Posting> entries;
};

// Postings decoded into flat arrays: entry k covers
// positions[offsets[k] .. offsets[k + 1]).
struct FlatPostings {
  std::vector<uint32_t> docs;
  std::vector<uint32_t> offsets{0};
  std::vector<uint32_t> positions;

  size_t size() const { return docs.size(); }
  uint32_t tf(size_t k) const { return offsets[k + 1] - offsets[k]; }
  std::span<const uint32_t> positions_of(size_t k) const {
    return {positions.data() + offsets[k], positions.data() + offsets[k + 1]};
  }
};

// Document ids and term frequencies only; positions are skipped.
struct DocFrequencies {
  std::vector<uint32_t> docs;
  std::vector<uint32_t> tfs;
};

struct CorpusStats {
  uint64_t num_docs = 0;      // N
  uint64_t total_tokens = 0;  // sum of |D|
  double avgdl = 0.0;
};

// Immutable positional inverted index over one corpus, one document per
// sentence. The in-memory layout mirrors the on-disk one: a bytewise
// sorted term dictionary and a single postings blob of LEB128 varints
// (per entry: doc gap, tf, then tf position gaps).
class PositionalIndex {
 public:
  PositionalIndex() = default;

  static PositionalIndex load(const std::filesystem::path& dir);
  // Publishes the index atomically at `dir`, replacing any previous one.
  void persist(const std::filesystem::path& dir) const;

  const std::string& corpus_name() const { return corpus_name_; }
  const CorpusStats& stats() const { return stats_; }
  size_t term_count() const { return terms_.size(); }
  std::string_view term_at(size_t i) const;

  uint64_t doc_freq(std::string_view term) const;
  PostingList postings(std::string_view term) const;
  FlatPostings flat_postings(std::string_view term) const;
  DocFrequencies doc_frequencies(std::string_view term) const;

  DocRecord doc(uint32_t doc_id) const;
  uint32_t doc_length(uint32_t doc_id) const { return lengths_.at(doc_id); }

 private:
  friend class IndexBuilder;

  struct TermEntry {
    uint64_t name_offset;
    uint32_t name_length;
    uint32_t df;
    uint64_t postings_offset;
    uint64_t postings_length;
  };

  const TermEntry* find(std::string_view term) const;
  std::string_view name_of(const TermEntry& e) const {
    return std::string_view(term_names_).substr(e.name_offset, e.name_length);
  }
  std::span<const uint8_t> bytes_of(const TermEntry& e) const {
    return std::span<const uint8_t>(postings_).subspan(e.postings_offset, e.postings_length);
  }

  std::string corpus_name_;
  CorpusStats stats_;
  std::string term_names_;
  std::vector<TermEntry> terms_;
  std::vector<uint8_t> postings_;
  std::vector<uint8_t> docs_;           // doc store records
  std::vector<uint64_t> doc_offsets_;   // record start per doc
  std::vector<uint32_t> lengths_;
};

// Single-writer builder. Documents receive dense ids in insertion order.
class IndexBuilder {
 public:
  explicit IndexBuilder(std::string corpus_name);
  ~IndexBuilder();
  IndexBuilder(IndexBuilder&&) noexcept;
  IndexBuilder& operator=(IndexBuilder&&) noexcept;

  // Throws BuildError(kEmptyDocument) when `norms` is empty.
  uint32_t add(std::span<const std::string> norms, std::string_view text, std::string_view locator);
  uint32_t add(const Sentence& sentence, std::string_view locator);

  size_t size() const;
  // Throws BuildError(kEmptyCorpus) when nothing was added.
  PositionalIndex finish() &&;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Builds from sentences; locators are the sentence ids.
PositionalIndex build_index(std::span<const Sentence> sentences, std::string corpus_name);

}  // namespace overlap
