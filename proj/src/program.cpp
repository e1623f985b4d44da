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

#include "coinfer/program.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "lexer.hpp"

namespace coinfer {

std::string class_constant(std::string_view name) {
  std::string out(name);
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

namespace {

using detail::Tok;
using detail::TokenCursor;

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view source) : cur_(detail::tokenize(source)) {}

  Program parse() {
    Program p;
    std::set<std::string> names{"object"};
    while (!cur_.at_end()) {
      ClassDecl c = class_decl();
      if (!names.insert(class_constant(c.name)).second) {
        throw ParseError("duplicate class '" + c.name + "'", c.pos);
      }
      p.classes.push_back(std::move(c));
    }
    for (const auto& c : p.classes) {
      if (!names.contains(class_constant(c.superclass))) {
        throw ParseError("class '" + c.name + "' extends undeclared class '" +
                             c.superclass + "'",
                         c.pos);
      }
      for (const auto& m : c.methods) check_new(m.body, names);
    }
    return p;
  }

 private:
  bool is_name() const {
    return cur_.peek().kind == Tok::kIdent || cur_.peek().kind == Tok::kVar;
  }

  std::string name(std::string_view what) {
    if (!is_name()) cur_.fail("expected " + std::string(what));
    return cur_.next().text;
  }

  void keyword(std::string_view word) {
    if (!cur_.is_word(word)) cur_.fail("expected '" + std::string(word) + "'");
    cur_.next();
  }

  ClassDecl class_decl() {
    ClassDecl c;
    c.pos = cur_.peek().pos;
    keyword("class");
    c.name = name("class name");
    if (cur_.is_word("extends")) {
      cur_.next();
      c.superclass = name("superclass name");
    }
    cur_.expect("{");
    std::set<std::string> fields;
    std::set<std::string> methods;
    while (!cur_.accept("}")) {
      SourcePos pos = cur_.peek().pos;
      std::string member = name("member declaration");
      if (cur_.accept(";")) {
        if (!fields.insert(member).second) {
          throw ParseError("duplicate field '" + member + "'", pos);
        }
        c.fields.push_back(member);
        continue;
      }
      std::vector<std::string> params = param_list();
      cur_.expect("{");
      if (member == c.name) {
        if (c.has_constructor) throw ParseError("duplicate constructor", pos);
        c.has_constructor = true;
        c.constructor.params = params;
        constructor_body(c, fields);
        continue;
      }
      if (!methods.insert(member).second) {
        throw ParseError("duplicate method '" + member + "'", pos);
      }
      Method m;
      m.name = member;
      m.params = params;
      params_ = params;
      keyword("return");
      m.body = expr();
      cur_.expect(";");
      cur_.expect("}");
      c.methods.push_back(std::move(m));
    }
    return c;
  }

  std::vector<std::string> param_list() {
    cur_.expect("(");
    std::vector<std::string> params;
    if (!cur_.is(")")) {
      do {
        SourcePos pos = cur_.peek().pos;
        std::string p = name("parameter");
        if (p == "this") throw ParseError("'this' is not a parameter name", pos);
        if (std::find(params.begin(), params.end(), p) != params.end()) {
          throw ParseError("duplicate parameter '" + p + "'", pos);
        }
        params.push_back(p);
      } while (cur_.accept(","));
    }
    cur_.expect(")");
    return params;
  }

  void constructor_body(ClassDecl& c, const std::set<std::string>& fields) {
    std::set<std::string> assigned;
    while (!cur_.accept("}")) {
      SourcePos pos = cur_.peek().pos;
      keyword("this");
      cur_.expect(".");
      std::string f = name("field name");
      cur_.expect("=");
      SourcePos ppos = cur_.peek().pos;
      std::string p = name("parameter");
      cur_.expect(";");
      if (!fields.contains(f)) {
        throw ParseError("constructor assigns undeclared field '" + f + "'", pos);
      }
      if (!assigned.insert(f).second) {
        throw ParseError("field '" + f + "' assigned twice", pos);
      }
      const auto& params = c.constructor.params;
      if (std::find(params.begin(), params.end(), p) == params.end()) {
        throw ParseError("'" + p + "' is not a constructor parameter", ppos);
      }
      c.constructor.assignments.emplace_back(f, p);
    }
  }

  std::vector<Expr> arg_list() {
    cur_.expect("(");
    std::vector<Expr> args;
    if (!cur_.is(")")) {
      do {
        args.push_back(expr());
      } while (cur_.accept(","));
    }
    cur_.expect(")");
    return args;
  }

  Expr expr() {
    Expr e = primary();
    while (cur_.is(".")) {
      cur_.next();
      Expr outer;
      outer.pos = cur_.peek().pos;
      outer.name = name("field or method name");
      outer.receiver = std::make_unique<Expr>(std::move(e));
      if (cur_.is("(")) {
        outer.kind = Expr::Kind::kInvoke;
        outer.args = arg_list();
      } else {
        outer.kind = Expr::Kind::kFieldAccess;
      }
      e = std::move(outer);
    }
    return e;
  }

  Expr primary() {
    Expr e;
    e.pos = cur_.peek().pos;
    if (cur_.peek().kind == Tok::kInt) {
      std::string digits = cur_.next().text;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e.value);
      if (ec != std::errc()) throw ParseError("integer literal out of range", e.pos);
      e.kind = Expr::Kind::kInt;
      return e;
    }
    if (cur_.accept("(")) {
      e = expr();
      cur_.expect(")");
      return e;
    }
    std::string word = name("expression");
    if (word == "this") {
      e.kind = Expr::Kind::kThis;
    } else if (word == "new") {
      e.kind = Expr::Kind::kNew;
      e.name = name("class name");
      e.args = arg_list();
    } else {
      bool param = std::find(params_.begin(), params_.end(), word) != params_.end();
      e.kind = param ? Expr::Kind::kParam : Expr::Kind::kField;
      e.name = word;
    }
    return e;
  }

  static void check_new(const Expr& e, const std::set<std::string>& names) {
    if (e.kind == Expr::Kind::kNew && !names.contains(class_constant(e.name))) {
      throw ParseError("instantiation of undeclared class '" + e.name + "'", e.pos);
    }
    if (e.receiver) check_new(*e.receiver, names);
    for (const auto& a : e.args) check_new(a, names);
  }

  TokenCursor cur_;
  std::vector<std::string> params_;
};

}  // namespace

Program parse_program(std::string_view source) { return ProgramParser(source).parse(); }

}  // namespace coinfer
