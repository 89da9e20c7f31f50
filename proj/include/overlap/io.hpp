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
#include <string>
#include <string_view>
#include <vector>

namespace overlap::io {

std::string read_file(const std::filesystem::path& path);
std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`, so readers never
// observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Stages a directory next to `target`; commit() swaps it into place.
// Destroying an uncommitted StagedDirectory removes the staging area.
class StagedDirectory {
 public:
  explicit StagedDirectory(std::filesystem::path target);
  ~StagedDirectory();
  StagedDirectory(const StagedDirectory&) = delete;
  StagedDirectory& operator=(const StagedDirectory&) = delete;

  const std::filesystem::path& path() const { return staging_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

// Lowercase hex SHA-256 of a file, or of every regular file under a
// directory (relative path and contents, in sorted path order).
std::string sha256_hex(std::string_view bytes);
std::string sha256_path(const std::filesystem::path& path);

// 64-bit FNV-1a, used for stable per-record seeds and identifiers.
uint64_t fnv1a64(std::string_view bytes);

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
// Fixed-point text with `digits` decimals.
std::string format_fixed(double value, int digits);

bool valid_utf8(std::string_view bytes);

}  // namespace overlap::io
