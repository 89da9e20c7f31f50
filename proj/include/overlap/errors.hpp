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

#include <stdexcept>
#include <string>

namespace overlap {

// Base class for every error raised by the library. The CLI maps any
// Error to exit code 2 (data error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BuildError : public Error {
 public:
  enum class Kind { kEmptyCorpus, kEmptyDocument };
  BuildError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  enum class Kind { kMissingPredicate, kBadPronoun, kBadSpan };
  ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class StatError : public Error {
 public:
  enum class Kind { kDegenerateTable, kNegativeCell };
  StatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SkipError : public Error {
 public:
  enum class Kind { kUngendered, kNoPronoun, kNameListExhausted };
  SkipError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace overlap
