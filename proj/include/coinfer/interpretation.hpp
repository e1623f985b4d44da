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

// Membership of regular values in regular types.
//
//   int   i in int
//   orL   v in t1             gives v in t1 \/ t2
//   orR   v in t2             gives v in t1 \/ t2
//   obj   v_i in t_i for every field of the type (the value may have more)
//         gives obj(c,[..f_i->v_i..]) in obj(c,[..f_i:t_i..])
//
// Derivations may be infinite; no infinite branch may end in orL/orR only.

#ifndef COINFER_INTERPRETATION_HPP_
#define COINFER_INTERPRETATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coinfer/term_store.hpp"

namespace coinfer {

/// Throws BudgetExceeded when more than `memo_limit` judgments are needed.
bool member(const ValueStore& values, const TypeStore& types, ValueId v, TypeId t,
            std::size_t memo_limit = 1'000'000);

struct SampleOptions {
  /// Probability of tying a sampled object back to an enclosing object of
  /// the same type node.
  double back_edge_probability = 0.25;
  /// Unfolding depth after which the canonical witness is used.
  std::size_t max_depth = 8;
};

/// Up to `count` distinct members of `t`, the canonical witness first.
/// Deterministic for a fixed seed. Each result is checked with member().
/// Throws std::invalid_argument if `t` is empty.
std::vector<ValueId> sample_values(TypeStore& types, ValueStore& values, TypeId t,
                                   std::size_t count, std::uint64_t seed,
                                   SampleOptions options = {});

}  // namespace coinfer

#endif  // COINFER_INTERPRETATION_HPP_
