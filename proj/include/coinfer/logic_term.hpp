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

// First-order terms, atoms and Horn clauses in a small Prolog dialect.
//
//   has_meth(succ,add,[This,N],R) :- field_acc(This,pred,P),
//       new(succ,[N],S), invoke(P,add,[S],R).
//
// Lists are '.'/2 cells ending in '[]'; `[a,b|T]` is the usual sugar.
// Record entries `f:T` are ':'/2 terms and unions `A \/ B` are '\/'/2 terms
// (right-associative). `<-` is accepted for `:-`.

#ifndef COINFER_LOGIC_TERM_HPP_
#define COINFER_LOGIC_TERM_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace coinfer {

struct Term {
  enum class Kind { kVar, kAtom, kInt, kCompound };

  Kind kind = Kind::kAtom;
  std::string name;  // variable, atom or functor
  std::int64_t value = 0;
  std::vector<Term> args;

  static Term var(std::string n);
  static Term atom(std::string n);
  static Term integer(std::int64_t v);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term nil() { return atom("[]"); }
  static Term cons(Term head, Term tail);
  static Term list(std::vector<Term> items, Term tail = nil());
  static Term entry(std::string field, Term type);  // f:T
  static Term union_of(Term left, Term right);

  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool operator==(const Atom&) const = default;
};

struct HornClause {
  Atom head;
  std::vector<Atom> body;

  bool operator==(const HornClause&) const = default;
};

/// A query atom plus optional equations `where X = t ; Y = u` that may be
/// mutually recursive (they are solved by rational unification).
struct Query {
  Atom goal;
  std::vector<std::pair<std::string, Term>> where;
};

std::vector<HornClause> parse_clauses(std::string_view source);
Atom parse_atom(std::string_view source);
Query parse_query(std::string_view source);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const HornClause& c);
std::string to_string(const std::vector<HornClause>& clauses);

nlohmann::json to_json(const Term& t);
nlohmann::json to_json(const Atom& a);
nlohmann::json to_json(const HornClause& c);

/// Renames variables to _0, _1, ... in order of first occurrence, so that
/// alpha-equivalent clauses become equal.
HornClause normalize_variables(const HornClause& c);

}  // namespace coinfer

#endif  // COINFER_LOGIC_TERM_HPP_
