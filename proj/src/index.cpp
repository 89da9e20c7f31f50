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

#include "overlap/index.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "overlap/errors.hpp"
#include "overlap/io.hpp"
#include "overlap/varint.hpp"

namespace fs = std::filesystem;

namespace overlap {

namespace {

constexpr std::string_view kManifest = "manifest.txt";
constexpr std::string_view kTermsFile = "terms.bin";
constexpr std::string_view kPostingsFile = "postings.bin";
constexpr std::string_view kDocsFile = "docs.bin";

std::string_view as_chars(std::span<const uint8_t> b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

uint64_t parse_u64(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw FormatError("manifest is missing " + key);
  uint64_t value = 0;
  const auto& s = it->second;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("manifest field " + key + " is not an integer");
  }
  return value;
}

}  // namespace

// --- PositionalIndex -------------------------------------------------------

std::string_view PositionalIndex::term_at(size_t i) const { return name_of(terms_.at(i)); }

const PositionalIndex::TermEntry* PositionalIndex::find(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                             [this](const TermEntry& e, std::string_view t) { return name_of(e) < t; });
  if (it == terms_.end() || name_of(*it) != term) return nullptr;
  return &*it;
}

uint64_t PositionalIndex::doc_freq(std::string_view term) const {
  const TermEntry* e = find(term);
  return e ? e->df : 0;
}

FlatPostings PositionalIndex::flat_postings(std::string_view term) const {
  FlatPostings out;
  const TermEntry* e = find(term);
  if (!e) return out;
  varint::Reader reader(bytes_of(*e));
  out.docs.reserve(e->df);
  out.offsets.reserve(e->df + 1);
  uint64_t doc = 0;
  for (uint32_t k = 0; k < e->df; ++k) {
    doc += reader.next();
    uint64_t tf = reader.next();
    if (doc >= stats_.num_docs || tf == 0) throw FormatError("corrupt postings for " + std::string(term));
    out.docs.push_back(static_cast<uint32_t>(doc));
    uint64_t pos = 0;
    for (uint64_t j = 0; j < tf; ++j) {
      pos += reader.next();
      out.positions.push_back(static_cast<uint32_t>(pos));
    }
    out.offsets.push_back(static_cast<uint32_t>(out.positions.size()));
  }
  return out;
}

DocFrequencies PositionalIndex::doc_frequencies(std::string_view term) const {
  DocFrequencies out;
  const TermEntry* e = find(term);
  if (!e) return out;
  varint::Reader reader(bytes_of(*e));
  out.docs.reserve(e->df);
  out.tfs.reserve(e->df);
  uint64_t doc = 0;
  for (uint32_t k = 0; k < e->df; ++k) {
    doc += reader.next();
    uint64_t tf = reader.next();
    if (doc >= stats_.num_docs || tf == 0) throw FormatError("corrupt postings for " + std::string(term));
    for (uint64_t j = 0; j < tf; ++j) reader.next();
    out.docs.push_back(static_cast<uint32_t>(doc));
    out.tfs.push_back(static_cast<uint32_t>(tf));
  }
  return out;
}

PostingList PositionalIndex::postings(std::string_view term) const {
  FlatPostings flat = flat_postings(term);
  PostingList list{std::string(term), {}};
  list.entries.reserve(flat.size());
  for (size_t k = 0; k < flat.size(); ++k) {
    auto pos = flat.positions_of(k);
    list.entries.push_back(Posting{flat.docs[k], std::vector<uint32_t>(pos.begin(), pos.end())});
  }
  return list;
}

DocRecord PositionalIndex::doc(uint32_t doc_id) const {
  if (doc_id >= stats_.num_docs) {
    throw LookupError("doc id " + std::to_string(doc_id) + " out of range (N=" +
                      std::to_string(stats_.num_docs) + ")");
  }
  varint::Reader reader(std::span<const uint8_t>(docs_).subspan(doc_offsets_[doc_id]));
  DocRecord rec;
  rec.doc_id = doc_id;
  rec.length = static_cast<uint32_t>(reader.next());
  rec.source.corpus = corpus_name_;
  rec.source.locator = std::string(as_chars(reader.take(reader.next())));
  rec.text = std::string(as_chars(reader.take(reader.next())));
  return rec;
}

void PositionalIndex::persist(const fs::path& dir) const {
  std::string terms;
  for (const auto& e : terms_) {
    varint::append(terms, e.name_length);
    terms.append(name_of(e));
    varint::append(terms, e.df);
    varint::append(terms, e.postings_length);
  }

  std::ostringstream manifest;
  manifest << "format_version=" << kIndexFormatVersion << "\n"
           << "corpus_name=" << corpus_name_ << "\n"
           << "N=" << stats_.num_docs << "\n"
           << "avgdl=" << io::format_double(stats_.avgdl) << "\n"
           << "term_count=" << terms_.size() << "\n"
           << "total_tokens=" << stats_.total_tokens << "\n"
           << "terms_bytes=" << terms.size() << "\n"
           << "postings_bytes=" << postings_.size() << "\n"
           << "docs_bytes=" << docs_.size() << "\n";

  io::StagedDirectory staged(dir);
  io::write_file_atomic(staged.path() / kTermsFile, terms);
  io::write_file_atomic(staged.path() / kPostingsFile, as_chars(postings_));
  io::write_file_atomic(staged.path() / kDocsFile, as_chars(docs_));
  io::write_file_atomic(staged.path() / kManifest, manifest.str());
  staged.commit();
}

PositionalIndex PositionalIndex::load(const fs::path& dir) {
  if (!fs::is_regular_file(dir / kManifest)) {
    throw FormatError("no index manifest in " + dir.string());
  }
  std::map<std::string, std::string> kv;
  {
    std::istringstream in(io::read_file(dir / kManifest));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw FormatError("malformed manifest line: " + line);
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  if (parse_u64(kv, "format_version") != static_cast<uint64_t>(kIndexFormatVersion)) {
    throw FormatError("unsupported index format_version " + kv["format_version"] + " (expected " +
                      std::to_string(kIndexFormatVersion) + ")");
  }
  if (!kv.count("corpus_name") || !kv.count("avgdl")) throw FormatError("manifest is incomplete");

  PositionalIndex index;
  index.corpus_name_ = kv["corpus_name"];
  index.stats_.num_docs = parse_u64(kv, "N");
  index.stats_.total_tokens = parse_u64(kv, "total_tokens");
  const uint64_t term_count = parse_u64(kv, "term_count");

  auto read_checked = [&](std::string_view name, const std::string& key) {
    fs::path p = dir / name;
    if (!fs::is_regular_file(p)) throw FormatError("missing index file " + p.string());
    auto bytes = io::read_file_bytes(p);
    if (bytes.size() != parse_u64(kv, key)) throw FormatError("truncated index file " + p.string());
    return bytes;
  };
  std::vector<uint8_t> terms = read_checked(kTermsFile, "terms_bytes");
  index.postings_ = read_checked(kPostingsFile, "postings_bytes");
  index.docs_ = read_checked(kDocsFile, "docs_bytes");

  if (index.stats_.num_docs == 0) throw FormatError("index has no documents");
  index.stats_.avgdl =
      static_cast<double>(index.stats_.total_tokens) / static_cast<double>(index.stats_.num_docs);
  if (io::format_double(index.stats_.avgdl) != kv["avgdl"]) {
    throw FormatError("manifest avgdl disagrees with N and total_tokens");
  }

  varint::Reader tr(terms);
  index.terms_.reserve(term_count);
  uint64_t postings_offset = 0;
  while (!tr.done()) {
    TermEntry e{};
    e.name_length = static_cast<uint32_t>(tr.next());
    e.name_offset = index.term_names_.size();
    index.term_names_.append(as_chars(tr.take(e.name_length)));
    uint64_t df = tr.next();
    if (df == 0 || df > index.stats_.num_docs) throw FormatError("document frequency out of range");
    e.df = static_cast<uint32_t>(df);
    e.postings_offset = postings_offset;
    e.postings_length = tr.next();
    postings_offset += e.postings_length;
    if (!index.terms_.empty() && !(index.name_of(index.terms_.back()) < index.name_of(e))) {
      throw FormatError("term dictionary is not strictly sorted");
    }
    index.terms_.push_back(e);
  }
  if (index.terms_.size() != term_count) throw FormatError("term_count mismatch");
  if (postings_offset != index.postings_.size()) throw FormatError("postings size mismatch");

  varint::Reader dr(index.docs_);
  index.doc_offsets_.reserve(index.stats_.num_docs);
  index.lengths_.reserve(index.stats_.num_docs);
  uint64_t total = 0;
  while (!dr.done()) {
    index.doc_offsets_.push_back(dr.position());
    uint64_t len = dr.next();
    if (len == 0) throw FormatError("empty document in doc store");
    index.lengths_.push_back(static_cast<uint32_t>(len));
    total += len;
    dr.take(dr.next());
    dr.take(dr.next());
  }
  if (index.lengths_.size() != index.stats_.num_docs) throw FormatError("doc count mismatch");
  if (total != index.stats_.total_tokens) throw FormatError("total_tokens mismatch");
  return index;
}

// --- IndexBuilder ----------------------------------------------------------

struct IndexBuilder::State {
  struct Accumulator {
    std::vector<uint8_t> bytes;
    uint32_t last_doc = 0;
    uint32_t df = 0;
  };

  std::string corpus;
  std::unordered_map<std::string, uint32_t, StringHash, std::equal_to<>> ids;
  std::vector<std::string> names;
  std::vector<Accumulator> accs;
  std::vector<uint8_t> docs;
  std::vector<uint64_t> offsets;
  std::vector<uint32_t> lengths;
  uint64_t total_tokens = 0;
  std::vector<std::pair<uint32_t, uint32_t>> scratch;
};

IndexBuilder::IndexBuilder(std::string corpus_name) : state_(std::make_unique<State>()) {
  if (corpus_name.empty() || corpus_name.find('\n') != std::string::npos) {
    throw BuildError(BuildError::Kind::kEmptyCorpus, "invalid corpus name");
  }
  state_->corpus = std::move(corpus_name);
}

IndexBuilder::~IndexBuilder() = default;
IndexBuilder::IndexBuilder(IndexBuilder&&) noexcept = default;
IndexBuilder& IndexBuilder::operator=(IndexBuilder&&) noexcept = default;

size_t IndexBuilder::size() const { return state_->lengths.size(); }

uint32_t IndexBuilder::add(const Sentence& sentence, std::string_view locator) {
  std::vector<std::string> norms;
  norms.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) norms.push_back(t.norm);
  return add(norms, sentence.raw, locator);
}

uint32_t IndexBuilder::add(std::span<const std::string> norms, std::string_view text,
                           std::string_view locator) {
  State& s = *state_;
  if (norms.empty()) {
    throw BuildError(BuildError::Kind::kEmptyDocument,
                     "document without tokens: " + std::string(locator));
  }
  if (s.lengths.size() >= UINT32_MAX) throw BuildError(BuildError::Kind::kEmptyCorpus, "too many documents");
  const auto doc = static_cast<uint32_t>(s.lengths.size());

  s.scratch.clear();
  for (size_t pos = 0; pos < norms.size(); ++pos) {
    auto it = s.ids.find(norms[pos]);
    uint32_t id;
    if (it == s.ids.end()) {
      id = static_cast<uint32_t>(s.names.size());
      s.ids.emplace(norms[pos], id);
      s.names.push_back(norms[pos]);
      s.accs.emplace_back();
    } else {
      id = it->second;
    }
    s.scratch.emplace_back(id, static_cast<uint32_t>(pos));
  }
  std::sort(s.scratch.begin(), s.scratch.end());

  for (size_t i = 0; i < s.scratch.size();) {
    size_t j = i;
    while (j < s.scratch.size() && s.scratch[j].first == s.scratch[i].first) ++j;
    auto& acc = s.accs[s.scratch[i].first];
    varint::append(acc.bytes, doc - acc.last_doc);
    varint::append(acc.bytes, j - i);
    uint32_t prev = 0;
    for (size_t k = i; k < j; ++k) {
      varint::append(acc.bytes, s.scratch[k].second - prev);
      prev = s.scratch[k].second;
    }
    acc.last_doc = doc;
    ++acc.df;
    i = j;
  }

  s.offsets.push_back(s.docs.size());
  varint::append(s.docs, norms.size());
  varint::append(s.docs, locator.size());
  s.docs.insert(s.docs.end(), locator.begin(), locator.end());
  varint::append(s.docs, text.size());
  s.docs.insert(s.docs.end(), text.begin(), text.end());
  s.lengths.push_back(static_cast<uint32_t>(norms.size()));
  s.total_tokens += norms.size();
  return doc;
}

PositionalIndex IndexBuilder::finish() && {
  State& s = *state_;
  if (s.lengths.empty()) {
    throw BuildError(BuildError::Kind::kEmptyCorpus, "corpus " + s.corpus + " has no documents");
  }
  std::vector<uint32_t> order(s.names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return s.names[a] < s.names[b]; });

  PositionalIndex index;
  index.corpus_name_ = s.corpus;
  size_t postings_size = 0;
  for (const auto& acc : s.accs) postings_size += acc.bytes.size();
  index.postings_.reserve(postings_size);
  index.terms_.reserve(order.size());
  for (uint32_t id : order) {
    auto& acc = s.accs[id];
    PositionalIndex::TermEntry e{};
    e.name_offset = index.term_names_.size();
    e.name_length = static_cast<uint32_t>(s.names[id].size());
    e.df = acc.df;
    e.postings_offset = index.postings_.size();
    e.postings_length = acc.bytes.size();
    index.term_names_ += s.names[id];
    index.postings_.insert(index.postings_.end(), acc.bytes.begin(), acc.bytes.end());
    std::vector<uint8_t>().swap(acc.bytes);
    index.terms_.push_back(e);
  }
  index.docs_ = std::move(s.docs);
  index.doc_offsets_ = std::move(s.offsets);
  index.lengths_ = std::move(s.lengths);
  index.stats_.num_docs = index.lengths_.size();
  index.stats_.total_tokens = s.total_tokens;
  index.stats_.avgdl = static_cast<double>(s.total_tokens) / static_cast<double>(index.stats_.num_docs);
  state_.reset();
  return index;
}

PositionalIndex build_index(std::span<const Sentence> sentences, std::string corpus_name) {
  IndexBuilder builder(std::move(corpus_name));
  for (const auto& s : sentences) builder.add(s, s.id);
  return std::move(builder).finish();
}

}  // namespace overlap
