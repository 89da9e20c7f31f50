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

#include <cctype>
#include <stdexcept>
#include <string>

#include "overlap/schema.hpp"

namespace testing_support {

// Locates the n-th (0-based) whole-word occurrence of `needle` in `text`.
inline overlap::CharSpan find_span(const std::string& text, const std::string& needle, int nth = 0) {
  size_t from = 0;
  while (true) {
    size_t at = text.find(needle, from);
    if (at == std::string::npos) throw std::runtime_error("'" + needle + "' not in '" + text + "'");
    const bool left_ok = at == 0 || !std::isalnum(static_cast<unsigned char>(text[at - 1]));
    const size_t end = at + needle.size();
    const bool right_ok = end == text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok && nth-- == 0) return {at, end};
    from = at + 1;
  }
}

inline overlap::RawInstance make_instance(const std::string& id, const std::string& sentence,
                                          const std::string& c1, const std::string& c2,
                                          const std::string& pronoun, int answer = 1, int pronoun_nth = 0) {
  return overlap::RawInstance{id,
                              sentence,
                              find_span(sentence, c1),
                              find_span(sentence, c2),
                              find_span(sentence, pronoun, pronoun_nth),
                              answer};
}

}  // namespace testing_support
