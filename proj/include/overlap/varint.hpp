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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "overlap/errors.hpp"

// Unsigned LEB128 varints: seven payload bits per byte, least significant
// group first, high bit set on every byte except the last.
namespace overlap::varint {

inline void append(std::vector<uint8_t>& out, uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<uint8_t>((value & 0x7F) | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<uint8_t>(value));
}

inline void append(std::string& out, uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<char>((value & 0x7F) | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<char>(value));
}

// Bounds-checked reader over a byte buffer. Running off the end or reading
// an overlong encoding throws FormatError, so truncated files are reported
// rather than read past.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint64_t next() {
    uint64_t value = 0;
    unsigned shift = 0;
    while (true) {
      if (pos_ >= bytes_.size()) throw FormatError("truncated varint");
      uint8_t byte = bytes_[pos_++];
      if (shift == 63 && (byte & 0x7E) != 0) throw FormatError("varint overflow");
      value |= static_cast<uint64_t>(byte & 0x7F) << shift;
      if ((byte & 0x80) == 0) return value;
      shift += 7;
      if (shift > 63) throw FormatError("varint overflow");
    }
  }

  std::span<const uint8_t> take(size_t n) {
    if (n > bytes_.size() - pos_) throw FormatError("truncated record");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ >= bytes_.size(); }
  size_t position() const { return pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace overlap::varint
