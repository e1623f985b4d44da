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

// AST and parser for an untyped class-based language:
//
//   class Succ extends Object {
//     pred;
//     Succ(n) { this.pred = n; }
//     add(n) { return pred.add(new Succ(n)); }
//   }
//
// Expressions are parameters, `this`, bare field names (read from `this`),
// `e.f`, `new C(args)`, `e.m(args)` and integer literals.

#ifndef COINFER_PROGRAM_HPP_
#define COINFER_PROGRAM_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coinfer/errors.hpp"

namespace coinfer {

struct Expr {
  enum class Kind { kParam, kThis, kField, kFieldAccess, kNew, kInvoke, kInt };

  Kind kind = Kind::kThis;
  std::string name;  // parameter, field, class (kNew) or method (kInvoke)
  std::int64_t value = 0;
  std::unique_ptr<Expr> receiver;  // kFieldAccess, kInvoke
  std::vector<Expr> args;          // kNew, kInvoke
  SourcePos pos;
};

struct Constructor {
  std::vector<std::string> params;
  std::vector<std::pair<std::string, std::string>> assignments;  // field, param
};

struct Method {
  std::string name;
  std::vector<std::string> params;
  Expr body;
};

struct ClassDecl {
  std::string name;                 // as written, e.g. "Succ"
  std::string superclass = "Object";
  std::vector<std::string> fields;
  bool has_constructor = false;
  Constructor constructor;
  std::vector<Method> methods;
  SourcePos pos;
};

struct Program {
  std::vector<ClassDecl> classes;
};

/// Throws ParseError on syntax errors, duplicate classes or members,
/// unknown superclasses or instantiated classes, and constructor
/// assignments to undeclared fields or from unknown parameters.
Program parse_program(std::string_view source);

/// The constant naming a class in clauses: first letter lower-cased
/// (Succ -> succ, Object -> object).
std::string class_constant(std::string_view name);

}  // namespace coinfer

#endif  // COINFER_PROGRAM_HPP_
