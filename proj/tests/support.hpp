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


// Generators and independent oracles shared by the test binaries. Nothing
// here calls the subtyping or emptiness modules.

#ifndef COINFER_TESTS_SUPPORT_HPP_
#define COINFER_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "coinfer/canonical.hpp"
#include "coinfer/interpretation.hpp"
#include "coinfer/term_store.hpp"
#include "coinfer/term_syntax.hpp"

namespace coinfer::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline TypeNode union_node(TypeId l, TypeId r) {
  TypeNode n;
  n.kind = TypeKind::kUnion;
  n.left = l;
  n.right = r;
  return n;
}

inline TypeNode obj_node(std::string cls, std::vector<TypeField> fields) {
  TypeNode n;
  n.kind = TypeKind::kObj;
  n.class_name = std::move(cls);
  std::sort(fields.begin(), fields.end(),
            [](const TypeField& a, const TypeField& b) { return a.name < b.name; });
  n.fields = std::move(fields);
  return n;
}

inline TypeNode int_node() {
  TypeNode n;
  n.kind = TypeKind::kInt;
  return n;
}

struct TypeGen {
  std::size_t max_nodes = 10;
  std::vector<std::string> classes{"a", "b"};
  std::vector<std::string> fields{"f", "g"};
  double p_int = 0.2;
  double p_obj = 0.45;
};

// A random regular type graph with 1..max_nodes nodes; edges may point
// anywhere, so cycles of every shape (including union-only ones) occur.
inline TypeId random_type(TypeStore& store, Rng& rng, const TypeGen& gen = {}) {
  std::size_t n = 1 + pick(rng, gen.max_nodes);
  std::vector<TypeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(store.reserve());
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double c = coin(rng);
    if (c < gen.p_int) {
      store.define(ids[i], int_node());
    } else if (c < gen.p_int + gen.p_obj) {
      std::vector<TypeField> fs;
      for (const auto& f : gen.fields) {
        if (coin(rng) < 0.5) fs.push_back({f, ids[pick(rng, n)]});
      }
      store.define(ids[i], obj_node(gen.classes[pick(rng, gen.classes.size())], fs));
    } else {
      store.define(ids[i], union_node(ids[pick(rng, n)], ids[pick(rng, n)]));
    }
  }
  return ids[0];
}

// Two copies of the graph with every edge redirected at random to either
// copy. The result denotes the same regular tree.
inline TypeId inflate(TypeStore& store, TypeId root, Rng& rng) {
  std::vector<TypeId> nodes = subterm_closure(store, root);
  std::map<TypeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  std::vector<TypeId> copy[2];
  for (auto& c : copy) {
    for (std::size_t i = 0; i < nodes.size(); ++i) c.push_back(store.reserve());
  }
  auto target = [&](TypeId t) { return copy[pick(rng, 2)][index.at(t)]; };
  for (auto& c : copy) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      TypeNode n = store.node(nodes[i]);
      if (n.kind == TypeKind::kUnion) {
        n.left = target(n.left);
        n.right = target(n.right);
      } else if (n.kind == TypeKind::kObj) {
        for (auto& f : n.fields) f.type = target(f.type);
      }
      store.define(c[i], n);
    }
  }
  return copy[pick(rng, 2)][0];
}

inline ValueId inflate(ValueStore& store, ValueId root, Rng& rng) {
  std::vector<ValueId> nodes = subterm_closure(store, root);
  std::map<ValueId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  std::vector<ValueId> copy[2];
  for (auto& c : copy) {
    for (std::size_t i = 0; i < nodes.size(); ++i) c.push_back(store.reserve());
  }
  for (auto& c : copy) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      ValueNode n = store.node(nodes[i]);
      for (auto& f : n.fields) f.value = copy[pick(rng, 2)][index.at(f.value)];
      store.define(c[i], n);
    }
  }
  return copy[0][0];
}

// Equality of the infinite unfoldings, compared down to `depth`. For graphs
// of n1 and n2 nodes, depth n1 + n2 decides bisimilarity.
inline bool unfold_equal(const TypeStore& s, TypeId a, TypeId b, std::size_t depth) {
  std::map<std::tuple<TypeId, TypeId, std::size_t>, bool> memo;
  std::function<bool(TypeId, TypeId, std::size_t)> go = [&](TypeId x, TypeId y,
                                                            std::size_t d) -> bool {
    if (d == 0) return true;
    auto key = std::make_tuple(x, y, d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const TypeNode& nx = s.node(x);
    const TypeNode& ny = s.node(y);
    bool eq = nx.kind == ny.kind;
    if (eq && nx.kind == TypeKind::kUnion) {
      eq = go(nx.left, ny.left, d - 1) && go(nx.right, ny.right, d - 1);
    } else if (eq && nx.kind == TypeKind::kObj) {
      eq = nx.class_name == ny.class_name && nx.fields.size() == ny.fields.size();
      for (std::size_t i = 0; eq && i < nx.fields.size(); ++i) {
        eq = nx.fields[i].name == ny.fields[i].name &&
             go(nx.fields[i].type, ny.fields[i].type, d - 1);
      }
    }
    memo[key] = eq;
    return eq;
  };
  return go(a, b, depth);
}

inline std::size_t graph_size(const TypeStore& s, TypeId t) {
  return subterm_closure(s, t).size();
}

inline std::size_t edge_count(const TypeStore& s, TypeId t) {
  std::size_t e = 0;
  for (TypeId id : subterm_closure(s, t)) e += s.node(id).children().size();
  return e;
}

// Searches for a member of `t` by brute force over choice functions: every
// union reached gets one child, tried both ways; obj nodes become value
// nodes (so the value graph is never larger than the type graph) and int
// becomes 0. A candidate counts only if member() accepts it. Choices that
// loop through unions alone are dead ends.
inline std::optional<ValueId> brute_force_witness(const TypeStore& types, ValueStore& values,
                                                  TypeId t) {
  std::map<TypeId, TypeId> choice;
  std::optional<ValueId> found;

  // Base node for `x` under the current choices; nullopt plus `open` set
  // when a union still needs a choice; nullopt alone for a union loop.
  auto base = [&](TypeId x, std::optional<TypeId>& open) -> std::optional<TypeId> {
    std::set<TypeId> seen;
    while (types.node(x).kind == TypeKind::kUnion) {
      if (!seen.insert(x).second) return std::nullopt;
      auto c = choice.find(x);
      if (c == choice.end()) {
        open = x;
        return std::nullopt;
      }
      x = c->second;
    }
    return x;
  };

  std::function<bool()> search = [&]() -> bool {
    std::vector<TypeId> todo{t};
    std::set<TypeId> done;
    std::vector<TypeId> bases;
    while (!todo.empty()) {
      TypeId x = todo.back();
      todo.pop_back();
      std::optional<TypeId> open;
      std::optional<TypeId> b = base(x, open);
      if (!b) {
        if (!open) return false;
        const TypeNode& u = types.node(*open);
        for (TypeId child : {u.left, u.right}) {
          choice[*open] = child;
          if (search()) return true;
        }
        choice.erase(*open);
        return false;
      }
      if (!done.insert(*b).second) continue;
      bases.push_back(*b);
      for (const auto& f : types.node(*b).fields) todo.push_back(f.type);
    }
    // All choices made: build the value graph.
    std::map<TypeId, ValueId> made;
    for (TypeId b : bases) {
      made[b] = types.node(b).kind == TypeKind::kInt ? values.make_int(0) : values.reserve();
    }
    for (TypeId b : bases) {
      const TypeNode& n = types.node(b);
      if (n.kind != TypeKind::kObj) continue;
      ValueNode v;
      v.kind = ValueKind::kObj;
      v.class_name = n.class_name;
      for (const auto& f : n.fields) {
        std::optional<TypeId> open;
        v.fields.push_back({f.name, made.at(*base(f.type, open))});
      }
      values.define(made.at(b), v);
    }
    std::optional<TypeId> open;
    ValueId root = made.at(*base(t, open));
    if (!member(values, types, root, t)) return false;
    found = root;
    return true;
  };
  search();
  return found;
}

inline TypeId parse_type(TypeStore& s, const std::string& src) { return read_type(s, src); }
inline ValueId parse_value(ValueStore& s, const std::string& src) { return read_value(s, src); }

// Type definitions used across tests, in the input syntax.
inline const char* kBot = "B = B \\/ B; root B";
inline const char* kNat = "N = obj(zero,[]) \\/ obj(succ,[pred:N]); root N";
inline const char* kPos =
    "P = obj(succ,[pred:obj(zero,[])]) \\/ obj(succ,[pred:P]); root P";
inline const char* kEvn = "E = obj(zero,[]) \\/ obj(succ,[pred:obj(succ,[pred:E])]); root E";
inline const char* kOdd =
    "O = obj(succ,[pred:obj(zero,[])]) \\/ obj(succ,[pred:obj(succ,[pred:O])]); root O";

}  // namespace coinfer::testing

#endif  // COINFER_TESTS_SUPPORT_HPP_
