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

#include "overlap/kernels.hpp"

#include <exception>
#include <iterator>

#include <omp.h>

#include "overlap/errors.hpp"
#include "overlap/text.hpp"

namespace overlap {

namespace {

std::vector<PreparedDocument> prepare_one(const RawDocument& doc, const WordList& abbreviations,
                                          PrepareStats& stats) {
  std::vector<PreparedDocument> out;
  auto emit = [&](std::string locator, std::string text, std::vector<std::string> norms) {
    ++stats.sentences;
    if (norms.empty()) {
      ++stats.empty_dropped;
      return;
    }
    out.push_back({std::move(locator), std::move(text), std::move(norms)});
  };
  if (doc.presplit) {
    std::string_view text = doc.text;
    size_t a = text.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return out;
    size_t b = text.find_last_not_of(" \t\r\n");
    text = text.substr(a, b - a + 1);
    emit(doc.locator, std::string(text), tokenize_norms(text));
    return out;
  }
  const std::string cleaned = doc.markup ? clean_markup(doc.text) : std::string();
  const std::string_view body = doc.markup ? std::string_view(cleaned) : std::string_view(doc.text);
  for (Sentence& s : split_sentences(body, abbreviations, doc.locator + ":s")) {
    std::vector<std::string> norms;
    norms.reserve(s.tokens.size());
    for (Token& t : s.tokens) norms.push_back(std::move(t.norm));
    emit(std::move(s.id), std::move(s.raw), std::move(norms));
  }
  return out;
}

template <typename T>
void append_moved(std::vector<T>& dst, std::vector<T>& src) {
  std::move(src.begin(), src.end(), std::back_inserter(dst));
}

}  // namespace

std::vector<PreparedDocument> prepare_documents_serial(std::span<const RawDocument> docs,
                                                       const WordList& abbreviations,
                                                       PrepareStats& stats) {
  std::vector<PreparedDocument> out;
  for (const RawDocument& doc : docs) {
    auto part = prepare_one(doc, abbreviations, stats);
    append_moved(out, part);
  }
  return out;
}

std::vector<PreparedDocument> prepare_documents_parallel(std::span<const RawDocument> docs,
                                                         const WordList& abbreviations,
                                                         PrepareStats& stats, int threads) {
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::vector<std::vector<PreparedDocument>> parts(docs.size());
  std::vector<PrepareStats> part_stats(docs.size());
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    parts[i] = prepare_one(docs[i], abbreviations, part_stats[i]);
  }
  std::vector<PreparedDocument> out;
  for (size_t i = 0; i < parts.size(); ++i) {
    stats.sentences += part_stats[i].sentences;
    stats.empty_dropped += part_stats[i].empty_dropped;
    append_moved(out, parts[i]);
  }
  return out;
}

PositionalIndex index_corpus(const std::filesystem::path& path, InputFormat format,
                             std::string corpus_name, const WordList& abbreviations,
                             KernelMode mode, int threads, IndexBuildStats& stats,
                             size_t batch_size) {
  IndexBuilder builder(std::move(corpus_name));
  read_documents(
      path, format, batch_size,
      [&](std::vector<RawDocument>&& batch) {
        std::vector<PreparedDocument> prepared =
            mode == KernelMode::kParallel
                ? prepare_documents_parallel(batch, abbreviations, stats.prepare, threads)
                : prepare_documents_serial(batch, abbreviations, stats.prepare);
        for (const PreparedDocument& d : prepared) builder.add(d.norms, d.text, d.locator);
      },
      stats.ingest);
  if (builder.size() == 0) {
    throw BuildError(BuildError::Kind::kEmptyCorpus, "no sentences found in " + path.string());
  }
  return std::move(builder).finish();
}

std::vector<InstanceOverlap> score_batch_serial(std::span<const OverlapQuery> queries,
                                                std::span<const PositionalIndex* const> indexes,
                                                const ScoringParams& params) {
  params.validate();
  std::vector<InstanceOverlap> out;
  out.reserve(queries.size());
  for (const OverlapQuery& q : queries) out.push_back(instance_overlap(q, indexes, params));
  return out;
}

std::vector<InstanceOverlap> score_batch_parallel(std::span<const OverlapQuery> queries,
                                                  std::span<const PositionalIndex* const> indexes,
                                                  const ScoringParams& params, int threads) {
  std::vector<ScoredQuery> scored =
      score_batch_top_k(queries, indexes, params, 0, KernelMode::kParallel, threads);
  std::vector<InstanceOverlap> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(std::move(s.overlap));
  return out;
}

std::vector<ScoredQuery> score_batch_top_k(std::span<const OverlapQuery> queries,
                                           std::span<const PositionalIndex* const> indexes,
                                           const ScoringParams& params, size_t top_k,
                                           KernelMode mode, int threads) {
  params.validate();
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  std::vector<ScoredQuery> out(queries.size());
  std::vector<std::exception_ptr> errors(queries.size());
  auto one = [&](std::ptrdiff_t i) {
    try {
      SearchResult r = search_all(queries[i], indexes, params, std::max<size_t>(top_k, 1));
      InstanceOverlap& o = out[i].overlap;
      o.instance_id = queries[i].instance_id;
      o.match_count = r.match_count;
      if (!r.matches.empty()) {
        o.best_match = r.matches.front();
        o.max_score = std::max(0.0, o.best_match->score);
      }
      if (top_k > 0) out[i].top = std::move(r.matches);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (mode == KernelMode::kParallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace overlap
