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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace overlap {

// text: the whole file is one document; lines: every non-blank line is one
// pre-split sentence; jsonl: every record's "body" field is one document.
enum class InputFormat { kText, kLines, kJsonl };

InputFormat parse_input_format(std::string_view name);
std::string_view input_format_name(InputFormat format);

struct RawDocument {
  std::string locator;  // "<file name>" or "<file name>:<line>"
  std::string text;
  bool presplit = false;
  bool markup = false;  // web-comment body; strip markup before use
};

struct IngestStats {
  size_t documents = 0;
  size_t skipped_records = 0;  // malformed JSON or missing body
  size_t undecodable = 0;      // invalid UTF-8
};

// Streams documents in input order, handing them to `sink` in batches of at
// most `batch_size`. Skipped inputs are counted, never fatal.
void read_documents(const std::filesystem::path& path, InputFormat format, size_t batch_size,
                    const std::function<void(std::vector<RawDocument>&&)>& sink, IngestStats& stats);

std::vector<RawDocument> read_all_documents(const std::filesystem::path& path, InputFormat format,
                                            IngestStats& stats);

// Removes URLs, quote markers, markdown links/emphasis/headings/bullets and
// common HTML entities; collapses whitespace. "[deleted]" and "[removed]"
// bodies become empty.
std::string clean_markup(std::string_view raw);

}  // namespace overlap
