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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "overlap/index.hpp"
#include "overlap/ingest.hpp"
#include "overlap/lexicon.hpp"
#include "overlap/retrieval.hpp"

// Data-parallel kernels. Each has a serial reference and an OpenMP variant
// that produce identical results; the serial versions back the tests and
// the benchmark baseline.
namespace overlap {

// One indexable document (a sentence) derived from a raw document.
struct PreparedDocument {
  std::string locator;
  std::string text;
  std::vector<std::string> norms;
};

struct PrepareStats {
  size_t sentences = 0;
  size_t empty_dropped = 0;  // sentences without any token
};

// Splits every raw document into sentences (pre-split documents pass through
// whole), tokenizes them and flattens the result in input order. Locators are
// "<doc locator>:s<k>" for split documents and the doc locator otherwise.
std::vector<PreparedDocument> prepare_documents_serial(std::span<const RawDocument> docs,
                                                       const WordList& abbreviations,
                                                       PrepareStats& stats);
std::vector<PreparedDocument> prepare_documents_parallel(std::span<const RawDocument> docs,
                                                         const WordList& abbreviations,
                                                         PrepareStats& stats, int threads = 0);

enum class KernelMode { kSerial, kParallel };

struct IndexBuildStats {
  IngestStats ingest;
  PrepareStats prepare;
};

// Streams a corpus file into a positional index, batch by batch.
PositionalIndex index_corpus(const std::filesystem::path& path, InputFormat format,
                             std::string corpus_name, const WordList& abbreviations,
                             KernelMode mode, int threads, IndexBuildStats& stats,
                             size_t batch_size = 65536);

std::vector<InstanceOverlap> score_batch_serial(std::span<const OverlapQuery> queries,
                                                std::span<const PositionalIndex* const> indexes,
                                                const ScoringParams& params);
std::vector<InstanceOverlap> score_batch_parallel(std::span<const OverlapQuery> queries,
                                                  std::span<const PositionalIndex* const> indexes,
                                                  const ScoringParams& params, int threads = 0);

// Pairs each query with its top-k matches; used when per-instance match
// listings are requested.
struct ScoredQuery {
  InstanceOverlap overlap;
  std::vector<ScoredMatch> top;
};
std::vector<ScoredQuery> score_batch_top_k(std::span<const OverlapQuery> queries,
                                           std::span<const PositionalIndex* const> indexes,
                                           const ScoringParams& params, size_t top_k,
                                           KernelMode mode, int threads = 0);

}  // namespace overlap
