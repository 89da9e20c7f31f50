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

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace overlap {

struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

// A set of lowercase words with stable insertion order, loaded from a
// one-entry-per-line file. Blank lines and lines starting with '#' are
// ignored.
class WordList {
 public:
  WordList() = default;
  WordList(std::initializer_list<std::string_view> words);
  explicit WordList(std::vector<std::string> words);

  static WordList load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  const std::vector<std::string>& words() const { return words_; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string, StringHash, std::equal_to<>> set_;
};

// Configurable vocabularies shared by the text, schema and pipeline
// modules. Given names keep their original capitalization in `words()`;
// membership tests are case-insensitive.
struct Lexicon {
  WordList connectives;
  WordList abbreviations;
  WordList male_names;
  WordList female_names;

  bool is_name(std::string_view lowered) const {
    return male_names.contains(lowered) || female_names.contains(lowered);
  }

  // Built-in defaults: the twelve-connective lexicon, the abbreviation
  // guard list and the bundled given-name lists.
  static const Lexicon& defaults();
};

WordList default_connectives();
WordList default_abbreviations();
WordList bundled_male_names();
WordList bundled_female_names();

}  // namespace overlap
