// Copyright 2026 The coinfer Authors
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

#ifndef COINFER_ERRORS_HPP_
#define COINFER_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coinfer {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Malformed input text: bad syntax, duplicate or unbound names.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : std::runtime_error(std::to_string(pos.line) + ":" +
                           std::to_string(pos.column) + ": " + message),
        pos_(pos) {}

  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// A coinductive procedure ran out of its memo/derivation budget. This is
/// never a negative answer: the question is left undecided.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t limit)
      : std::runtime_error(what + " exceeded budget of " +
                           std::to_string(limit) + " entries"),
        limit_(limit) {}

  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace coinfer

#endif  // COINFER_ERRORS_HPP_
