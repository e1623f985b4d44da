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

#include "coinfer/canonical.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace coinfer {
namespace {

struct TypeTraits {
  using Store = TypeStore;
  using Id = TypeId;
  using Node = TypeNode;

  static bool pending(const Node& n) { return n.kind == TypeKind::kPending; }

  static std::string label(const Node& n) {
    switch (n.kind) {
      case TypeKind::kInt:
        return "int";
      case TypeKind::kUnion:
        return "or";
      case TypeKind::kObj: {
        std::string s = "obj " + n.class_name;
        for (const auto& f : n.fields) s += " " + f.name;
        return s;
      }
      case TypeKind::kPending:
        break;
    }
    throw std::logic_error("pending type node");
  }

  static bool is_leaf(const Node& n) { return n.kind == TypeKind::kInt; }

  static Id make_leaf(Store& store, const Node&) { return store.make_int(); }

  static Node rebuild(const Node& rep, const std::vector<Id>& kids) {
    Node out;
    out.kind = rep.kind;
    if (rep.kind == TypeKind::kUnion) {
      out.left = kids[0];
      out.right = kids[1];
    } else {
      out.class_name = rep.class_name;
      for (std::size_t i = 0; i < rep.fields.size(); ++i) {
        out.fields.push_back({rep.fields[i].name, kids[i]});
      }
    }
    return out;
  }
};

struct ValueTraits {
  using Store = ValueStore;
  using Id = ValueId;
  using Node = ValueNode;

  static bool pending(const Node& n) { return n.kind == ValueKind::kPending; }

  static std::string label(const Node& n) {
    switch (n.kind) {
      case ValueKind::kInt:
        return "int " + std::to_string(n.integer);
      case ValueKind::kObj: {
        std::string s = "obj " + n.class_name;
        for (const auto& f : n.fields) s += " " + f.name;
        return s;
      }
      case ValueKind::kPending:
        break;
    }
    throw std::logic_error("pending value node");
  }

  static bool is_leaf(const Node& n) { return n.kind == ValueKind::kInt; }

  static Id make_leaf(Store& store, const Node& n) {
    return store.make_int(n.integer);
  }

  static Node rebuild(const Node& rep, const std::vector<Id>& kids) {
    Node out;
    out.kind = rep.kind;
    out.class_name = rep.class_name;
    for (std::size_t i = 0; i < rep.fields.size(); ++i) {
      out.fields.push_back({rep.fields[i].name, kids[i]});
    }
    return out;
  }
};

template <typename Traits>
std::vector<typename Traits::Id> closure_of(const typename Traits::Store& store,
                                            typename Traits::Id root) {
  using Id = typename Traits::Id;
  std::vector<Id> order;
  std::unordered_map<Id, bool> seen;
  std::vector<Id> stack{root};
  while (!stack.empty()) {
    Id id = stack.back();
    stack.pop_back();
    if (!seen.emplace(id, true).second) continue;
    const auto& n = store.node(id);
    if (Traits::pending(n)) throw std::logic_error("pending node reached");
    order.push_back(id);
    auto kids = n.children();
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (!seen.contains(*it)) stack.push_back(*it);
    }
  }
  return order;
}

template <typename Traits>
typename Traits::Id canonicalize_impl(typename Traits::Store& store,
                                      typename Traits::Id root) {
  using Id = typename Traits::Id;
  std::vector<Id> nodes = closure_of<Traits>(store, root);
  std::unordered_map<Id, std::uint32_t> local;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) local.emplace(nodes[i], i);

  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> children;
  labels.reserve(nodes.size());
  children.reserve(nodes.size());
  for (Id id : nodes) {
    const auto& n = store.node(id);
    labels.push_back(Traits::label(n));
    std::vector<std::uint32_t> kids;
    for (Id c : n.children()) kids.push_back(local.at(c));
    children.push_back(std::move(kids));
  }
  std::vector<std::uint32_t> block = refine_partition(labels, children);

  // Number blocks breadth-first from the root; the numbering and the block
  // contents make up the signature.
  std::uint32_t max_block = 0;
  for (auto b : block) max_block = std::max(max_block, b);
  std::vector<std::uint32_t> rep(max_block + 1, 0);
  std::vector<bool> has_rep(max_block + 1, false);
  for (std::uint32_t i = 0; i < block.size(); ++i) {
    if (!has_rep[block[i]]) {
      has_rep[block[i]] = true;
      rep[block[i]] = i;
    }
  }
  std::vector<std::int64_t> position(max_block + 1, -1);
  std::vector<std::uint32_t> order;
  std::deque<std::uint32_t> queue{block[0]};
  position[block[0]] = 0;
  while (!queue.empty()) {
    std::uint32_t b = queue.front();
    queue.pop_front();
    order.push_back(b);
    for (std::uint32_t c : children[rep[b]]) {
      std::uint32_t cb = block[c];
      if (position[cb] < 0) {
        position[cb] = static_cast<std::int64_t>(order.size() + queue.size());
        queue.push_back(cb);
      }
    }
  }
  std::string signature;
  for (std::uint32_t b : order) {
    signature += labels[rep[b]];
    signature += '(';
    for (std::uint32_t c : children[rep[b]]) {
      signature += std::to_string(position[block[c]]);
      signature += ',';
    }
    signature += ");";
  }
  if (auto hit = store.lookup_canonical(signature)) return *hit;

  std::vector<Id> built(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto n = store.node(nodes[rep[order[i]]]);
    built[i] = Traits::is_leaf(n) ? Traits::make_leaf(store, n) : store.reserve();
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto n = store.node(nodes[rep[order[i]]]);
    if (Traits::is_leaf(n)) continue;
    std::vector<Id> kids;
    for (std::uint32_t c : children[rep[order[i]]]) {
      kids.push_back(built[position[block[c]]]);
    }
    store.define(built[i], Traits::rebuild(n, kids));
  }
  store.register_canonical(signature, built[0]);
  return built[0];
}

}  // namespace

std::vector<std::uint32_t> refine_partition(
    std::span<const std::string> labels,
    std::span<const std::vector<std::uint32_t>> children) {
  const std::size_t n = labels.size();
  std::vector<std::uint32_t> block(n);
  std::size_t count = 0;
  {
    std::unordered_map<std::string, std::uint32_t> by_label;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = by_label.emplace(
          labels[i], static_cast<std::uint32_t>(by_label.size()));
      block[i] = it->second;
    }
    count = by_label.size();
  }
  // Moore-style refinement: split blocks by the blocks of their children
  // until the number of blocks stops growing.
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> by_signature;
    std::vector<std::uint32_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> sig;
      sig.reserve(children[i].size() + 1);
      sig.push_back(block[i]);
      for (std::uint32_t c : children[i]) sig.push_back(block[c]);
      auto [it, fresh] = by_signature.emplace(
          std::move(sig), static_cast<std::uint32_t>(by_signature.size()));
      next[i] = it->second;
    }
    block = std::move(next);
    if (by_signature.size() == count) break;
    count = by_signature.size();
  }
  return block;
}

std::vector<TypeId> subterm_closure(const TypeStore& store, TypeId root) {
  return closure_of<TypeTraits>(store, root);
}

std::vector<ValueId> subterm_closure(const ValueStore& store, ValueId root) {
  return closure_of<ValueTraits>(store, root);
}

TypeId canonicalize(TypeStore& store, TypeId root) {
  return canonicalize_impl<TypeTraits>(store, root);
}

ValueId canonicalize(ValueStore& store, ValueId root) {
  return canonicalize_impl<ValueTraits>(store, root);
}

bool equal(TypeStore& store, TypeId a, TypeId b) {
  return canonicalize(store, a) == canonicalize(store, b);
}

bool equal(ValueStore& store, ValueId a, ValueId b) {
  return canonicalize(store, a) == canonicalize(store, b);
}

bool is_cyclic(const ValueStore& store, ValueId root) {
  // Iterative three-colour DFS.
  std::unordered_map<ValueId, int> colour;
  std::vector<std::pair<ValueId, std::size_t>> stack{{root, 0}};
  colour[root] = 1;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    auto kids = store.node(id).children();
    if (next == kids.size()) {
      colour[id] = 2;
      stack.pop_back();
      continue;
    }
    ValueId c = kids[next++];
    int& cc = colour[c];
    if (cc == 1) return true;
    if (cc == 0) {
      cc = 1;
      stack.emplace_back(c, 0);
    }
  }
  return false;
}

}  // namespace coinfer
