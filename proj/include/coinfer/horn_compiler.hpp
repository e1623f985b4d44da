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

// Abstract compilation of a Program into Horn clauses over types.
//
// Output order: class/extends facts, subclass rules, the runtime clauses for
// field access, record access and invocation, the new/3 clauses, dec_field
// and not_dec_field facts with has_field, then dec_meth and not_dec_meth
// facts with the has_meth clauses (one per method plus inheritance).
//
// Negation in the inheritance clauses is replaced by ground not_dec_field /
// not_dec_meth facts over every declared class (object included) and every
// field / method name used in the program. A program without fields (or
// methods) gets no has_field (has_meth) clauses.

#ifndef COINFER_HORN_COMPILER_HPP_
#define COINFER_HORN_COMPILER_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "coinfer/logic_term.hpp"
#include "coinfer/program.hpp"

namespace coinfer {

std::vector<HornClause> compile_program(const Program& program);

/// The program-independent clauses (subclass, field_acc, rec_acc, invoke).
std::vector<HornClause> runtime_clauses();

std::string clauses_to_prolog(const std::vector<HornClause>& clauses);
nlohmann::json clauses_to_json(const std::vector<HornClause>& clauses);

}  // namespace coinfer

#endif  // COINFER_HORN_COMPILER_HPP_
