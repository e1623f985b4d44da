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

// Tokenizer shared by the type/value, clause and source-program readers.

#ifndef COINFER_SRC_LEXER_HPP_
#define COINFER_SRC_LEXER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "coinfer/errors.hpp"

namespace coinfer::detail {

enum class Tok { kIdent, kVar, kInt, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(std::string_view source);

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (index_ + 1 < tokens_.size()) ++index_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::kEnd; }
  bool is(std::string_view punct) const {
    return peek().kind == Tok::kPunct && peek().text == punct;
  }
  bool is_word(std::string_view word) const {
    return peek().kind == Tok::kIdent && peek().text == word;
  }
  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  std::string expect_kind(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail("expected " + std::string(what));
    return next().text;
  }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.pos);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace coinfer::detail

#endif  // COINFER_SRC_LEXER_HPP_
