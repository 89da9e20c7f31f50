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

#include "overlap/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "overlap/errors.hpp"

namespace overlap {
namespace bundled {
extern const std::string_view kConnectives;
extern const std::string_view kAbbreviations;
extern const std::string_view kMaleNames;
extern const std::string_view kFemaleNames;
}  // namespace bundled

namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> parse_lines(std::string_view text) {
  std::vector<std::string> words;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') words.emplace_back(line);
    pos = nl + 1;
  }
  return words;
}

}  // namespace

WordList::WordList(std::initializer_list<std::string_view> words) {
  for (auto w : words) {
    if (set_.insert(lowered(w)).second) words_.emplace_back(w);
  }
}

WordList::WordList(std::vector<std::string> words) {
  for (auto& w : words) {
    if (set_.insert(lowered(w)).second) words_.push_back(std::move(w));
  }
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read word list: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  WordList list(parse_lines(buf.str()));
  if (list.empty()) throw DataError("word list is empty: " + path.string());
  return list;
}

bool WordList::contains(std::string_view word) const {
  // Entries are stored lowercased.
  if (std::none_of(word.begin(), word.end(), [](unsigned char c) { return std::isupper(c); })) {
    return set_.find(word) != set_.end();
  }
  return set_.find(lowered(word)) != set_.end();
}

WordList default_connectives() { return WordList(parse_lines(bundled::kConnectives)); }
WordList default_abbreviations() { return WordList(parse_lines(bundled::kAbbreviations)); }
WordList bundled_male_names() { return WordList(parse_lines(bundled::kMaleNames)); }
WordList bundled_female_names() { return WordList(parse_lines(bundled::kFemaleNames)); }

const Lexicon& Lexicon::defaults() {
  static const Lexicon lexicon{default_connectives(), default_abbreviations(),
                               bundled_male_names(), bundled_female_names()};
  return lexicon;
}

}  // namespace overlap
