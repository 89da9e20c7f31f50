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

#include "overlap/ingest.hpp"

#include <fstream>
#include <regex>

#include "json.hpp"
#include "overlap/errors.hpp"
#include "overlap/io.hpp"

namespace fs = std::filesystem;

namespace overlap {

InputFormat parse_input_format(std::string_view name) {
  if (name == "text") return InputFormat::kText;
  if (name == "lines") return InputFormat::kLines;
  if (name == "jsonl") return InputFormat::kJsonl;
  throw DataError("unknown input format '" + std::string(name) + "' (text, lines, jsonl)");
}

std::string_view input_format_name(InputFormat format) {
  switch (format) {
    case InputFormat::kText: return "text";
    case InputFormat::kLines: return "lines";
    case InputFormat::kJsonl: return "jsonl";
  }
  return "text";
}

void read_documents(const fs::path& path, InputFormat format, size_t batch_size,
                    const std::function<void(std::vector<RawDocument>&&)>& sink, IngestStats& stats) {
  if (batch_size == 0) batch_size = 1;
  const std::string name = path.filename().string();
  std::vector<RawDocument> batch;
  auto push = [&](RawDocument doc) {
    ++stats.documents;
    batch.push_back(std::move(doc));
    if (batch.size() >= batch_size) {
      sink(std::move(batch));
      batch = {};
    }
  };

  if (format == InputFormat::kText) {
    std::string text = io::read_file(path);
    if (!io::valid_utf8(text)) {
      ++stats.undecodable;
    } else {
      push(RawDocument{name, std::move(text), false});
    }
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      if (!io::valid_utf8(line)) {
        ++stats.undecodable;
        continue;
      }
      std::string locator = name + ":" + std::to_string(lineno);
      if (format == InputFormat::kLines) {
        push(RawDocument{std::move(locator), std::move(line), true});
        continue;
      }
      nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
      if (record.is_discarded() || !record.is_object() || !record.contains("body") ||
          !record["body"].is_string()) {
        ++stats.skipped_records;
        continue;
      }
      push(RawDocument{std::move(locator), record["body"].get<std::string>(), false, true});
    }
  }
  if (!batch.empty()) sink(std::move(batch));
}

std::vector<RawDocument> read_all_documents(const fs::path& path, InputFormat format,
                                            IngestStats& stats) {
  std::vector<RawDocument> all;
  read_documents(
      path, format, 4096,
      [&](std::vector<RawDocument>&& batch) {
        for (auto& d : batch) all.push_back(std::move(d));
      },
      stats);
  return all;
}

std::string clean_markup(std::string_view raw) {
  static const std::regex kLink(R"(\[([^\]]*)\]\([^)]*\))");
  static const std::regex kUrl(R"((https?://|www\.)[^\s)\]]+)", std::regex::icase);
  static const std::regex kLinePrefix(R"((^|\n)[ \t]*((&gt;|>)+[ \t]*|#{1,6}[ \t]+|[*+-][ \t]+))");
  static const std::regex kEmphasis(R"(\*\*|__|~~|`|\^)");
  static const std::regex kWhitespace(R"(\s+)");

  std::string text(raw);
  {
    size_t a = text.find_first_not_of(" \t\r\n");
    size_t b = text.find_last_not_of(" \t\r\n");
    std::string_view trimmed =
        a == std::string::npos ? std::string_view() : std::string_view(text).substr(a, b - a + 1);
    if (trimmed == "[deleted]" || trimmed == "[removed]") return {};
  }
  text = std::regex_replace(text, kLinePrefix, "$1");
  text = std::regex_replace(text, kLink, "$1");
  text = std::regex_replace(text, kUrl, "");
  text = std::regex_replace(text, kEmphasis, "");
  for (auto [entity, ch] : {std::pair{"&amp;", "&"}, std::pair{"&lt;", "<"}, std::pair{"&gt;", ">"},
                            std::pair{"&quot;", "\""}, std::pair{"&#39;", "'"}, std::pair{"&nbsp;", " "}}) {
    size_t pos = 0;
    const std::string e(entity);
    while ((pos = text.find(e, pos)) != std::string::npos) {
      text.replace(pos, e.size(), ch);
      pos += 1;
    }
  }
  text = std::regex_replace(text, kWhitespace, " ");
  size_t a = text.find_first_not_of(' ');
  if (a == std::string::npos) return {};
  size_t b = text.find_last_not_of(' ');
  return text.substr(a, b - a + 1);
}

}  // namespace overlap
