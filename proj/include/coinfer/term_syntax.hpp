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

// Concrete syntax for regular terms: finite systems of equations.
//
//   Nat = Zer \/ obj(succ,[pred: Nat]);
//   Zer = obj(zero,[]);
//   root Nat
//
// Variables start with an upper-case letter, class and field names with a
// lower-case one. `\/` is right-associative. Value systems use `->` for
// fields and integer literals instead of `int`. Comments run from `%` or
// `//` to the end of the line.

#ifndef COINFER_TERM_SYNTAX_HPP_
#define COINFER_TERM_SYNTAX_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coinfer/errors.hpp"
#include "coinfer/term_store.hpp"

namespace coinfer {

struct TermExpr {
  enum class Kind { kVar, kInt, kLiteral, kObj, kUnion };

  Kind kind = Kind::kInt;
  std::string name;                                  // kVar, kObj class
  std::int64_t literal = 0;                          // kLiteral
  std::vector<std::pair<std::string, TermExpr>> fields;  // kObj
  std::vector<TermExpr> operands;                    // kUnion: exactly two
  SourcePos pos;
};

struct EquationSystem {
  bool is_value = false;
  std::vector<std::pair<std::string, TermExpr>> bindings;
  std::string root;
};

EquationSystem parse_type_system(std::string_view source);
EquationSystem parse_value_system(std::string_view source);

/// Builds the term graph denoted by a validated system. Aliases (`X = Y`)
/// are followed; every other variable becomes one node.
TypeId resolve_type(TypeStore& store, const EquationSystem& system);
ValueId resolve_value(ValueStore& store, const EquationSystem& system);

/// Convenience: parse + resolve.
TypeId read_type(TypeStore& store, std::string_view source);
ValueId read_value(ValueStore& store, std::string_view source);

/// Prints a term as an equation system in the syntax above. Nodes that are
/// shared or cyclic get a variable `T<k>` / `V<k>`; the rest are inlined.
std::string print_type(const TypeStore& store, TypeId root);
std::string print_value(const ValueStore& store, ValueId root);

/// Single-line inline rendering when the term is a finite tree; falls back
/// to print_type() otherwise.
std::string show_type(const TypeStore& store, TypeId root);

// JSON form: {"root": "T0", "bindings": {"T0": {...}, ...}} where a binding
// is {"kind":"int"}, {"kind":"union","left":X,"right":Y} or
// {"kind":"obj","class":C,"fields":{f:X,...}}; values use
// {"kind":"int","value":N} instead of the int type.
nlohmann::json type_to_json(const TypeStore& store, TypeId root);
nlohmann::json value_to_json(const ValueStore& store, ValueId root);
TypeId type_from_json(TypeStore& store, const nlohmann::json& j);
ValueId value_from_json(ValueStore& store, const nlohmann::json& j);

}  // namespace coinfer

#endif  // COINFER_TERM_SYNTAX_HPP_
