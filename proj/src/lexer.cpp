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

#include "lexer.hpp"

#include <cctype>

namespace coinfer::detail {

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };

  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '%' || starts("//")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (starts("/*")) {
      SourcePos start = pos;
      advance(2);
      while (i < src.size() && !starts("*/")) advance(1);
      if (i >= src.size()) throw ParseError("unterminated comment", start);
      advance(2);
      continue;
    }
    Token t;
    t.pos = pos;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      t.text = std::string(src.substr(i, j - i));
      t.kind = (std::isupper(c) || c == '_') ? Tok::kVar : Tok::kIdent;
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = Tok::kInt;
      advance(j - i);
    } else {
      static constexpr std::string_view kMulti[] = {"\\/", "->", ":-", "<-"};
      bool matched = false;
      for (auto m : kMulti) {
        if (starts(m)) {
          t.text = std::string(m);
          advance(m.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view kSingle = "()[]{},;:=.|-+";
        if (kSingle.find(static_cast<char>(c)) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") +
                               static_cast<char>(c) + "'",
                           pos);
        }
        t.text = std::string(1, static_cast<char>(c));
        advance(1);
      }
      // `<-` is accepted as a spelling of `:-`.
      if (t.text == "<-") t.text = ":-";
      t.kind = Tok::kPunct;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::kEnd;
  end.pos = pos;
  out.push_back(end);
  return out;
}

}  // namespace coinfer::detail
