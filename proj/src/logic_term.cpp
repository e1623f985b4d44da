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

#include "coinfer/logic_term.hpp"

#include <charconv>
#include <map>

#include "coinfer/errors.hpp"
#include "lexer.hpp"

namespace coinfer {

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::kVar;
  t.name = std::move(n);
  return t;
}

Term Term::atom(std::string n) {
  Term t;
  t.kind = Kind::kAtom;
  t.name = std::move(n);
  return t;
}

Term Term::integer(std::int64_t v) {
  Term t;
  t.kind = Kind::kInt;
  t.value = v;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  Term t;
  t.kind = Kind::kCompound;
  t.name = std::move(functor);
  t.args = std::move(args);
  return t;
}

Term Term::cons(Term head, Term tail) {
  return compound(".", {std::move(head), std::move(tail)});
}

Term Term::list(std::vector<Term> items, Term tail) {
  Term out = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = cons(std::move(*it), std::move(out));
  }
  return out;
}

Term Term::entry(std::string field, Term type) {
  return compound(":", {atom(std::move(field)), std::move(type)});
}

Term Term::union_of(Term left, Term right) {
  return compound("\\/", {std::move(left), std::move(right)});
}

namespace {

using detail::Tok;
using detail::TokenCursor;

class ClauseParser {
 public:
  explicit ClauseParser(std::string_view source) : cur_(detail::tokenize(source)) {}

  std::vector<HornClause> clauses() {
    std::vector<HornClause> out;
    while (!cur_.at_end()) {
      anon_ = 0;
      HornClause c;
      c.head = atom();
      if (cur_.accept(":-")) {
        do {
          c.body.push_back(atom());
        } while (cur_.accept(","));
      }
      cur_.expect(".");
      out.push_back(std::move(c));
    }
    return out;
  }

  Atom single_atom() {
    Atom a = atom();
    cur_.accept(".");
    if (!cur_.at_end()) cur_.fail("expected end of input");
    return a;
  }

  Query query() {
    Query q;
    q.goal = atom();
    if (cur_.is_word("where")) {
      cur_.next();
      do {
        if (cur_.at_end() || cur_.is(".")) break;
        std::string v = cur_.expect_kind(Tok::kVar, "variable");
        cur_.expect("=");
        q.where.emplace_back(std::move(v), term());
      } while (cur_.accept(";"));
    }
    cur_.accept(".");
    if (!cur_.at_end()) cur_.fail("expected end of query");
    return q;
  }

 private:
  Atom atom() {
    Atom a;
    a.predicate = cur_.expect_kind(Tok::kIdent, "predicate name");
    if (cur_.accept("(")) {
      do {
        a.args.push_back(term());
      } while (cur_.accept(","));
      cur_.expect(")");
    }
    return a;
  }

  Term term() {
    Term left = primary();
    if (cur_.accept("\\/")) return Term::union_of(std::move(left), term());
    return left;
  }

  Term primary() {
    const detail::Token& t = cur_.peek();
    if (t.kind == Tok::kVar) {
      std::string name = cur_.next().text;
      if (name == "_") name = "_" + std::to_string(anon_++);
      return Term::var(std::move(name));
    }
    if (t.kind == Tok::kInt || cur_.is("-")) {
      bool negative = cur_.accept("-");
      SourcePos pos = cur_.peek().pos;
      std::string digits = cur_.expect_kind(Tok::kInt, "integer");
      if (negative) digits.insert(digits.begin(), '-');
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size()) {
        throw ParseError("integer out of range", pos);
      }
      return Term::integer(v);
    }
    if (t.kind == Tok::kIdent) {
      std::string name = cur_.next().text;
      if (!cur_.accept("(")) return Term::atom(std::move(name));
      std::vector<Term> args;
      do {
        args.push_back(term());
      } while (cur_.accept(","));
      cur_.expect(")");
      return Term::compound(std::move(name), std::move(args));
    }
    if (cur_.accept("[")) {
      if (cur_.accept("]")) return Term::nil();
      std::vector<Term> items;
      do {
        Term e = term();
        if (cur_.accept(":")) e = Term::compound(":", {std::move(e), term()});
        items.push_back(std::move(e));
      } while (cur_.accept(","));
      Term tail = Term::nil();
      if (cur_.accept("|")) tail = term();
      cur_.expect("]");
      return Term::list(std::move(items), std::move(tail));
    }
    if (cur_.accept("(")) {
      Term inner = term();
      cur_.expect(")");
      return inner;
    }
    cur_.fail("expected a term");
  }

  TokenCursor cur_;
  int anon_ = 0;
};

void print(const Term& t, std::string& out);

void print_union_operand(const Term& t, std::string& out) {
  bool paren = t.kind == Term::Kind::kCompound && t.name == "\\/" && t.args.size() == 2;
  if (paren) out += '(';
  print(t, out);
  if (paren) out += ')';
}

void print(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::kVar:
    case Term::Kind::kAtom:
      out += t.name;
      return;
    case Term::Kind::kInt:
      out += std::to_string(t.value);
      return;
    case Term::Kind::kCompound:
      break;
  }
  if (t.name == "." && t.args.size() == 2) {
    out += '[';
    const Term* at = &t;
    bool first = true;
    while (at->kind == Term::Kind::kCompound && at->name == "." && at->args.size() == 2) {
      if (!first) out += ',';
      first = false;
      print(at->args[0], out);
      at = &at->args[1];
    }
    if (!(at->kind == Term::Kind::kAtom && at->name == "[]")) {
      out += '|';
      print(*at, out);
    }
    out += ']';
    return;
  }
  if (t.name == ":" && t.args.size() == 2) {
    print_union_operand(t.args[0], out);
    out += ':';
    print(t.args[1], out);
    return;
  }
  if (t.name == "\\/" && t.args.size() == 2) {
    print_union_operand(t.args[0], out);
    out += " \\/ ";
    print(t.args[1], out);
    return;
  }
  out += t.name;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    print(t.args[i], out);
  }
  out += ')';
}

void rename(Term& t, std::map<std::string, std::string>& names) {
  if (t.kind == Term::Kind::kVar) {
    auto [it, fresh] = names.emplace(t.name, "_" + std::to_string(names.size()));
    t.name = it->second;
  }
  for (auto& a : t.args) rename(a, names);
}

}  // namespace

std::vector<HornClause> parse_clauses(std::string_view source) {
  return ClauseParser(source).clauses();
}

Atom parse_atom(std::string_view source) { return ClauseParser(source).single_atom(); }

Query parse_query(std::string_view source) { return ClauseParser(source).query(); }

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const Atom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      print(a.args[i], out);
    }
    out += ')';
  }
  return out;
}

std::string to_string(const HornClause& c) {
  std::string out = to_string(c.head);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    out += i ? ", " : " :- ";
    out += to_string(c.body[i]);
  }
  return out + ".";
}

std::string to_string(const std::vector<HornClause>& clauses) {
  std::string out;
  for (const auto& c : clauses) out += to_string(c) + "\n";
  return out;
}

nlohmann::json to_json(const Term& t) {
  switch (t.kind) {
    case Term::Kind::kVar:
      return {{"var", t.name}};
    case Term::Kind::kAtom:
      return {{"atom", t.name}};
    case Term::Kind::kInt:
      return {{"int", t.value}};
    case Term::Kind::kCompound:
      break;
  }
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : t.args) args.push_back(to_json(a));
  return {{"functor", t.name}, {"args", args}};
}

nlohmann::json to_json(const Atom& a) {
  nlohmann::json args = nlohmann::json::array();
  for (const auto& t : a.args) args.push_back(to_json(t));
  return {{"predicate", a.predicate}, {"args", args}};
}

nlohmann::json to_json(const HornClause& c) {
  nlohmann::json body = nlohmann::json::array();
  for (const auto& a : c.body) body.push_back(to_json(a));
  return {{"head", to_json(c.head)}, {"body", body}, {"text", to_string(c)}};
}

HornClause normalize_variables(const HornClause& c) {
  HornClause out = c;
  std::map<std::string, std::string> names;
  for (auto& t : out.head.args) rename(t, names);
  for (auto& a : out.body) {
    for (auto& t : a.args) rename(t, names);
  }
  return out;
}

}  // namespace coinfer
