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

// Coinductive SLD resolution over rational terms, with subsumption.
//
// Goals are solved left to right, depth first. Before trying clauses for an
// atom, the solver tries
//
//   1. the coinductive hypothesis: unify the atom with an ancestor atom;
//   2. subsumption: for predicates with a variance entry, accept the atom if
//      an ancestor with the same predicate covers it argument-wise:
//        inv     unify
//        contra  current <= ancestor     (ground types; else unify)
//        co      ancestor <= current     (ground types; else unify)
//      Lists of types are compared pointwise.
//
// Unification has no occurs check, so X = f(X) yields a cyclic term.
// Search is bounded by the ancestor depth and run with iterative deepening.

#ifndef COINFER_ENGINE_HPP_
#define COINFER_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coinfer/logic_term.hpp"
#include "coinfer/term_store.hpp"

namespace coinfer {

enum class Variance { kInv, kCo, kContra };

struct SolverConfig {
  std::size_t max_depth = 128;
  std::size_t initial_depth = 16;
  std::size_t max_answers = 8;
  bool subsumption_enabled = true;
  bool coinduction_enabled = true;
  /// Budget for each subtyping check made by subsumption.
  std::size_t memo_limit = 1'000'000;
  std::map<std::string, std::vector<Variance>> variance = default_variance();

  /// invoke: target and method name fixed, arguments contravariant, result
  /// covariant. rec_acc: the record is contravariant, which also lets a
  /// record match a clause head that lists a subset of its fields.
  static std::map<std::string, std::vector<Variance>> default_variance();
};

enum class SolveStatus { kAnswers, kNoAnswers, kDepthExhausted };

struct Answer {
  /// Query variable -> rendered term; cyclic parts refer to `equations`.
  std::vector<std::pair<std::string, std::string>> bindings;
  std::vector<std::pair<std::string, std::string>> equations;
  /// The instantiated query as a query string (with `where` equations).
  std::string instance;
  /// The last query argument as a type, when it is a ground type term.
  std::optional<TypeId> result_type;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

/// A subtype check that made a subsumption step succeed.
struct Obligation {
  TypeId left;
  TypeId right;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNoAnswers;
  std::vector<Answer> answers;
  std::size_t depth = 0;  // depth bound of the final iteration
  std::size_t steps = 0;
  std::vector<Obligation> obligations;
};

class Engine {
 public:
  explicit Engine(std::vector<HornClause> clauses);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  /// Types appearing in answers and obligations are built in `types`.
  SolveResult solve(const Query& query, const SolverConfig& config, TypeStore& types);

  const std::vector<HornClause>& clauses() const { return clauses_; }

 private:
  struct Impl;
  friend std::optional<Answer> unify_rational(const Term& a, const Term& b);
  std::vector<HornClause> clauses_;
  std::unique_ptr<Impl> impl_;
};

/// True iff the answer's result type is a subtype of `expected`. Throws
/// std::invalid_argument if the result is not a ground type.
bool check_answer(const Answer& answer, TypeStore& types, TypeId expected);

/// Unifies two terms over rational trees; variables with the same name are
/// the same variable. On success returns each variable's binding rendered
/// as in Answer (cyclic parts named T0, T1, ...).
std::optional<Answer> unify_rational(const Term& a, const Term& b);

}  // namespace coinfer

#endif  // COINFER_ENGINE_HPP_
