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

// Coinductive subtyping between regular union/object types.
//
// Rules, for a judgment s <= t:
//
//   int    int <= int
//   orL    s1 <= t, s2 <= t                    gives s1 \/ s2 <= t
//   distr  obj(c,[f:s1,..]) <= t, obj(c,[f:s2,..]) <= t
//                                              gives obj(c,[f:s1 \/ s2,..]) <= t
//   obj    s_i <= t_i for every field of t     gives obj(c,[..s_i..]) <= obj(c,[..t_i..])
//   orR1   s <= t1                             gives s <= t1 \/ t2
//   orR2   s <= t2                             gives s <= t1 \/ t2
//   empty  s denotes the empty type            gives s <= t
//
// Derivations may be infinite but must be contractive: no infinite branch may
// eventually use orR1/orR2 only. The solver explores the finite graph of
// reachable judgments and decides it as a Buchi game (see proof_game.hpp).

#ifndef COINFER_SUBTYPING_HPP_
#define COINFER_SUBTYPING_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "coinfer/emptiness.hpp"
#include "coinfer/term_store.hpp"

namespace coinfer {

enum class SubtypeRule { kInt, kOrL, kDistr, kObj, kOrR1, kOrR2, kEmpty };

std::string rule_label(SubtypeRule rule);

enum class Verdict { kTrue, kFalse, kUnknown };

struct SubtypeConfig {
  /// Maximum number of judgments explored by one query.
  std::size_t memo_limit = 1'000'000;
  /// Disable to decide the rule system without (empty).
  bool use_empty_rule = true;
};

struct DerivationNode {
  TypeId left;
  TypeId right;
  SubtypeRule rule = SubtypeRule::kInt;
  std::vector<std::size_t> premises;
  /// A repeated ancestor judgment. `target` is the ancestor's index and
  /// `cycle_labels` the rules used on the way back to it.
  bool back_edge = false;
  std::size_t target = 0;
  std::vector<SubtypeRule> cycle_labels;
};

/// A derivation tree with node 0 as root; cycles are closed by back-edges.
struct Derivation {
  std::vector<DerivationNode> nodes;
};

class SubtypeSolver {
 public:
  explicit SubtypeSolver(TypeStore& store, SubtypeConfig config = {});

  /// Throws BudgetExceeded when the judgment graph exceeds the memo limit.
  bool subtype(TypeId left, TypeId right);
  Verdict check(TypeId left, TypeId right);
  bool equivalent(TypeId a, TypeId b);

  /// A contractive derivation, or nothing when left is not a subtype.
  std::optional<Derivation> derive(TypeId left, TypeId right);

  /// Judgments explored by the most recent query.
  std::size_t last_judgments() const { return last_judgments_; }

  TypeStore& store() { return store_; }
  EmptinessChecker& emptiness() { return empty_; }

 private:
  struct Game;
  void build(Game& game, TypeId left, TypeId right, bool use_cache);

  TypeStore& store_;
  SubtypeConfig config_;
  EmptinessChecker empty_;
  std::unordered_map<std::uint64_t, bool> verdicts_;
  std::size_t last_judgments_ = 0;
};

/// Checks that every node instantiates its rule and that every back-edge
/// closes a contractive cycle. Returns an error message, or nothing.
std::optional<std::string> validate_derivation(const Derivation& d,
                                               TypeStore& store,
                                               EmptinessChecker& empty);

std::string derivation_to_text(const Derivation& d, const TypeStore& store);
nlohmann::json derivation_to_json(const Derivation& d, const TypeStore& store);

/// The canonical empty type: Bot = Bot \/ Bot.
TypeId make_bottom(TypeStore& store);

}  // namespace coinfer

#endif  // COINFER_SUBTYPING_HPP_
