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

// Bisimulation minimization of term graphs.
//
// Two terms are equal iff their infinite unfoldings coincide. canonicalize()
// computes the coarsest bisimulation by partition refinement, rebuilds the
// quotient graph in a deterministic breadth-first order and interns it in
// the store, so bisimilar inputs get the same canonical node id.

#ifndef COINFER_CANONICAL_HPP_
#define COINFER_CANONICAL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coinfer/term_store.hpp"

namespace coinfer {

/// Coarsest partition in which nodes of a block share their label and have
/// pairwise equivalent ordered children. Returns a block index per node.
std::vector<std::uint32_t> refine_partition(
    std::span<const std::string> labels,
    std::span<const std::vector<std::uint32_t>> children);

/// Nodes reachable from `root`, in depth-first preorder. Throws
/// std::logic_error on a pending node.
std::vector<TypeId> subterm_closure(const TypeStore& store, TypeId root);
std::vector<ValueId> subterm_closure(const ValueStore& store, ValueId root);

TypeId canonicalize(TypeStore& store, TypeId root);
ValueId canonicalize(ValueStore& store, ValueId root);

bool equal(TypeStore& store, TypeId a, TypeId b);
bool equal(ValueStore& store, ValueId a, ValueId b);

/// True iff some node reachable from `root` is reachable from itself.
bool is_cyclic(const ValueStore& store, ValueId root);

}  // namespace coinfer

#endif  // COINFER_CANONICAL_HPP_
