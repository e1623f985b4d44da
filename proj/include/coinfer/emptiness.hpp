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

// Non-emptiness of regular types.
//
// A type is non-empty iff it has a contractive derivation under
//
//   (int)  int            (obj)  all field types non-empty
//   (orL)  left non-empty (orR)  right non-empty
//
// where every cycle must pass through an obj node. The check is a depth-first
// walk that keeps the current path on a stack; reaching a node already on the
// path succeeds iff an obj node lies between its two occurrences.
//
// Results that depend on a node still on the path are not cached, which on
// some graphs makes the walk exponential. The walk therefore runs under a
// budget linear in the edges it has seen, and past it the query is answered
// by a component-based linear algorithm instead.

#ifndef COINFER_EMPTINESS_HPP_
#define COINFER_EMPTINESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coinfer/term_store.hpp"

namespace coinfer {

/// The path of the depth-first walk. Each entry remembers the position of
/// the nearest obj entry at or below it, so is_contractive is O(1).
class PathStack {
 public:
  std::size_t push(TypeId id, bool is_obj);
  void pop();
  std::size_t size() const { return entries_.size(); }
  TypeId at(std::size_t pos) const { return entries_[pos].id; }

  /// True iff an obj entry lies at a position >= `pos`.
  bool is_contractive(std::size_t pos) const;

 private:
  struct Entry {
    TypeId id;
    std::int64_t last_obj;
  };
  std::vector<Entry> entries_;
};

class EmptinessChecker {
 public:
  explicit EmptinessChecker(const TypeStore& store) : store_(store) {}

  bool not_empty(TypeId t);
  bool is_empty(TypeId t) { return !not_empty(t); }

  /// Every node reachable from `t` that denotes a non-empty type.
  std::unordered_set<TypeId> nonempty_set(TypeId t);

  /// A member of `t` built from a non-emptiness derivation (0 for int), or
  /// nothing when `t` is empty. Cyclic derivations give cyclic values.
  std::optional<ValueId> witness(TypeId t, ValueStore& values);

  /// The linear fallback on its own; exposed for testing.
  bool not_empty_by_components(TypeId t) {
    last_visits_ = 0;
    return solve_by_components(t);
  }

  /// Node visits performed by the most recent not_empty() call.
  std::size_t last_visits() const { return last_visits_; }

 private:
  bool solve_by_components(TypeId root);

  const TypeStore& store_;
  // Results that do not depend on the path below the node they were
  // computed for; these are exact and safe to reuse.
  std::unordered_map<TypeId, bool> memo_;
  std::size_t last_visits_ = 0;
};

}  // namespace coinfer

#endif  // COINFER_EMPTINESS_HPP_
