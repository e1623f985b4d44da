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

#include "coinfer/subtyping.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "coinfer/canonical.hpp"
#include "coinfer/errors.hpp"
#include "coinfer/proof_game.hpp"
#include "coinfer/term_syntax.hpp"

namespace coinfer {
namespace {

constexpr int kCachedTrue = -1;

std::uint64_t key(TypeId a, TypeId b) {
  return (static_cast<std::uint64_t>(a.value) << 32) | b.value;
}

bool fields_cover(const TypeNode& s, const TypeNode& t) {
  // Both field lists are sorted by name.
  std::size_t i = 0;
  for (const auto& f : t.fields) {
    while (i < s.fields.size() && s.fields[i].name < f.name) ++i;
    if (i == s.fields.size() || s.fields[i].name != f.name) return false;
  }
  return true;
}

TypeId field_type(const TypeNode& n, const std::string& name) {
  for (const auto& f : n.fields) {
    if (f.name == name) return f.type;
  }
  throw std::logic_error("missing field " + name);
}

}  // namespace

std::string rule_label(SubtypeRule rule) {
  switch (rule) {
    case SubtypeRule::kInt:
      return "int";
    case SubtypeRule::kOrL:
      return "orL";
    case SubtypeRule::kDistr:
      return "distr";
    case SubtypeRule::kObj:
      return "obj";
    case SubtypeRule::kOrR1:
      return "orR1";
    case SubtypeRule::kOrR2:
      return "orR2";
    case SubtypeRule::kEmpty:
      return "empty";
  }
  return "?";
}

TypeId make_bottom(TypeStore& store) {
  TypeId b = store.reserve();
  TypeNode n;
  n.kind = TypeKind::kUnion;
  n.left = b;
  n.right = b;
  store.define(b, std::move(n));
  return canonicalize(store, b);
}

struct SubtypeSolver::Game {
  ProofGame game;
  std::unordered_map<std::uint64_t, ProofGame::Index> index;
  std::unordered_map<ProofGame::Index, std::pair<TypeId, TypeId>> judgment;
};

SubtypeSolver::SubtypeSolver(TypeStore& store, SubtypeConfig config)
    : store_(store), config_(config), empty_(store) {}

void SubtypeSolver::build(Game& g, TypeId left, TypeId right, bool use_cache) {
  std::vector<TypeId> closure_list = subterm_closure(store_, left);
  std::unordered_set<TypeId> closure(closure_list.begin(), closure_list.end());
  std::vector<ProofGame::Index> work;

  auto node_for = [&](TypeId s, TypeId t) {
    auto [it, fresh] = g.index.emplace(key(s, t), 0);
    if (fresh) {
      if (g.index.size() > config_.memo_limit) {
        throw BudgetExceeded("subtyping judgments", config_.memo_limit);
      }
      it->second = g.game.add_judgment();
      g.judgment.emplace(it->second, std::make_pair(s, t));
      work.push_back(it->second);
    }
    return it->second;
  };
  auto rule = [&](ProofGame::Index j, SubtypeRule r,
                  std::vector<std::pair<TypeId, TypeId>> premises) {
    std::vector<ProofGame::Index> ps;
    for (auto [s, t] : premises) ps.push_back(node_for(s, t));
    bool productive = r != SubtypeRule::kOrR1 && r != SubtypeRule::kOrR2;
    g.game.add_rule(j, productive, std::move(ps), static_cast<int>(r));
  };

  node_for(left, right);
  while (!work.empty()) {
    ProofGame::Index j = work.back();
    work.pop_back();
    auto [s, t] = g.judgment.at(j);
    if (use_cache) {
      if (auto c = verdicts_.find(key(s, t)); c != verdicts_.end()) {
        if (c->second) g.game.add_rule(j, true, {}, kCachedTrue);
        continue;
      }
    }
    // Copies: node_for() may grow the store.
    const TypeNode sn = store_.node(s);
    const TypeNode tn = store_.node(t);
    if (config_.use_empty_rule && empty_.is_empty(s)) {
      if (sn.kind == TypeKind::kUnion) {
        rule(j, SubtypeRule::kOrL, {{sn.left, t}, {sn.right, t}});
      }
      rule(j, SubtypeRule::kEmpty, {});
      continue;
    }
    if (sn.kind == TypeKind::kInt && tn.kind == TypeKind::kInt) {
      rule(j, SubtypeRule::kInt, {});
    }
    if (sn.kind == TypeKind::kUnion) {
      rule(j, SubtypeRule::kOrL, {{sn.left, t}, {sn.right, t}});
    }
    if (sn.kind == TypeKind::kObj) {
      for (const auto& f : sn.fields) {
        const TypeNode fn = store_.node(f.type);
        if (fn.kind != TypeKind::kUnion) continue;
        if (!closure.contains(fn.left) || !closure.contains(fn.right)) {
          throw std::logic_error("distr produced a field type outside the closure");
        }
        TypeId s1 = store_.with_field(s, f.name, fn.left);
        TypeId s2 = store_.with_field(s, f.name, fn.right);
        rule(j, SubtypeRule::kDistr, {{s1, t}, {s2, t}});
      }
    }
    if (sn.kind == TypeKind::kObj && tn.kind == TypeKind::kObj &&
        sn.class_name == tn.class_name && fields_cover(sn, tn)) {
      std::vector<std::pair<TypeId, TypeId>> ps;
      for (const auto& f : tn.fields) ps.emplace_back(field_type(sn, f.name), f.type);
      rule(j, SubtypeRule::kObj, std::move(ps));
    }
    if (tn.kind == TypeKind::kUnion) {
      rule(j, SubtypeRule::kOrR1, {{s, tn.left}});
      rule(j, SubtypeRule::kOrR2, {{s, tn.right}});
    }
  }
  last_judgments_ = g.index.size();
}

Verdict SubtypeSolver::check(TypeId left, TypeId right) {
  try {
    return subtype(left, right) ? Verdict::kTrue : Verdict::kFalse;
  } catch (const BudgetExceeded&) {
    return Verdict::kUnknown;
  }
}

bool SubtypeSolver::subtype(TypeId left, TypeId right) {
  TypeId l = canonicalize(store_, left);
  TypeId r = canonicalize(store_, right);
  if (auto c = verdicts_.find(key(l, r)); c != verdicts_.end()) {
    last_judgments_ = 0;
    return c->second;
  }
  Game g;
  build(g, l, r, true);
  g.game.solve();
  for (const auto& [k, j] : g.index) verdicts_[k] = g.game.wins(j);
  return verdicts_.at(key(l, r));
}

bool SubtypeSolver::equivalent(TypeId a, TypeId b) {
  return subtype(a, b) && subtype(b, a);
}

std::optional<Derivation> SubtypeSolver::derive(TypeId left, TypeId right) {
  TypeId l = canonicalize(store_, left);
  TypeId r = canonicalize(store_, right);
  Game g;
  build(g, l, r, false);
  g.game.solve();
  ProofGame::Index root = g.index.at(key(l, r));
  if (!g.game.wins(root)) return std::nullopt;

  Derivation d;
  std::vector<ProofGame::Index> path;        // judgments on the current branch
  std::vector<std::size_t> path_nodes;       // their derivation nodes
  struct Item {
    ProofGame::Index judgment;
    std::size_t parent;  // derivation node; SIZE_MAX for the root
    std::size_t depth;   // path length at which this item hangs
  };
  std::vector<Item> stack{{root, SIZE_MAX, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    path.resize(it.depth);
    path_nodes.resize(it.depth);
    if (d.nodes.size() >= config_.memo_limit) {
      throw BudgetExceeded("derivation nodes", config_.memo_limit);
    }
    auto [s, t] = g.judgment.at(it.judgment);
    DerivationNode node;
    node.left = s;
    node.right = t;
    std::size_t id = d.nodes.size();
    if (it.parent != SIZE_MAX) d.nodes[it.parent].premises.push_back(id);

    auto on_path = std::find(path.begin(), path.end(), it.judgment);
    if (on_path != path.end()) {
      std::size_t k = static_cast<std::size_t>(on_path - path.begin());
      node.back_edge = true;
      node.target = path_nodes[k];
      std::set<SubtypeRule> labels;
      for (std::size_t i = k; i < path_nodes.size(); ++i) {
        labels.insert(d.nodes[path_nodes[i]].rule);
      }
      node.cycle_labels.assign(labels.begin(), labels.end());
      node.rule = d.nodes[node.target].rule;
      d.nodes.push_back(std::move(node));
      continue;
    }
    ProofGame::Index rule = *g.game.chosen_rule(it.judgment);
    node.rule = static_cast<SubtypeRule>(g.game.tag(rule));
    d.nodes.push_back(std::move(node));
    path.push_back(it.judgment);
    path_nodes.push_back(id);
    const auto& premises = g.game.successors(rule);
    for (auto p = premises.rbegin(); p != premises.rend(); ++p) {
      stack.push_back({*p, id, path.size()});
    }
  }
  return d;
}

std::optional<std::string> validate_derivation(const Derivation& d,
                                               TypeStore& store,
                                               EmptinessChecker& empty) {
  if (d.nodes.empty()) return "empty derivation";
  std::vector<std::size_t> parent(d.nodes.size(), SIZE_MAX);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    for (std::size_t p : d.nodes[i].premises) {
      if (p <= i || p >= d.nodes.size() || parent[p] != SIZE_MAX) {
        return "node " + std::to_string(i) + " has a malformed premise list";
      }
      parent[p] = i;
    }
  }
  auto fail = [](std::size_t i, const std::string& why) {
    return std::optional<std::string>("node " + std::to_string(i) + ": " + why);
  };
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const DerivationNode& n = d.nodes[i];
    if (n.back_edge) {
      if (!n.premises.empty()) return fail(i, "back-edge with premises");
      std::set<SubtypeRule> labels;
      bool ancestor = false;
      for (std::size_t a = parent[i]; a != SIZE_MAX; a = parent[a]) {
        labels.insert(d.nodes[a].rule);
        if (a == n.target) {
          ancestor = true;
          break;
        }
      }
      if (!ancestor) return fail(i, "back-edge target is not an ancestor");
      const DerivationNode& t = d.nodes[n.target];
      if (t.left != n.left || t.right != n.right) {
        return fail(i, "back-edge to a different judgment");
      }
      if (std::vector<SubtypeRule>(labels.begin(), labels.end()) != n.cycle_labels) {
        return fail(i, "cycle labels do not match the cycle");
      }
      bool contractive = std::any_of(labels.begin(), labels.end(), [](SubtypeRule r) {
        return r != SubtypeRule::kOrR1 && r != SubtypeRule::kOrR2;
      });
      if (!contractive) return fail(i, "cycle uses orR1/orR2 only");
      continue;
    }
    std::vector<std::pair<TypeId, TypeId>> want;
    const TypeNode sn = store.node(n.left);
    const TypeNode tn = store.node(n.right);
    bool ok = true;
    switch (n.rule) {
      case SubtypeRule::kInt:
        ok = sn.kind == TypeKind::kInt && tn.kind == TypeKind::kInt;
        break;
      case SubtypeRule::kEmpty:
        ok = empty.is_empty(n.left);
        break;
      case SubtypeRule::kOrL:
        ok = sn.kind == TypeKind::kUnion;
        if (ok) want = {{sn.left, n.right}, {sn.right, n.right}};
        break;
      case SubtypeRule::kOrR1:
      case SubtypeRule::kOrR2:
        ok = tn.kind == TypeKind::kUnion;
        if (ok) want = {{n.left, n.rule == SubtypeRule::kOrR1 ? tn.left : tn.right}};
        break;
      case SubtypeRule::kObj:
        ok = sn.kind == TypeKind::kObj && tn.kind == TypeKind::kObj &&
             sn.class_name == tn.class_name && fields_cover(sn, tn);
        if (ok) {
          for (const auto& f : tn.fields) want.emplace_back(field_type(sn, f.name), f.type);
        }
        break;
      case SubtypeRule::kDistr: {
        ok = false;
        if (sn.kind != TypeKind::kObj || n.premises.size() != 2) break;
        for (const auto& f : sn.fields) {
          const TypeNode fn = store.node(f.type);
          if (fn.kind != TypeKind::kUnion) continue;
          std::vector<std::pair<TypeId, TypeId>> cand = {
              {store.with_field(n.left, f.name, fn.left), n.right},
              {store.with_field(n.left, f.name, fn.right), n.right}};
          bool match = true;
          for (std::size_t k = 0; k < 2; ++k) {
            const DerivationNode& p = d.nodes[n.premises[k]];
            match = match && p.left == cand[k].first && p.right == cand[k].second;
          }
          if (match) {
            ok = true;
            want = cand;
            break;
          }
        }
        break;
      }
    }
    if (!ok) return fail(i, "rule " + rule_label(n.rule) + " does not apply");
    if (want.size() != n.premises.size()) return fail(i, "wrong number of premises");
    for (std::size_t k = 0; k < want.size(); ++k) {
      const DerivationNode& p = d.nodes[n.premises[k]];
      if (p.left != want[k].first || p.right != want[k].second) {
        return fail(i, "premise " + std::to_string(k) + " has the wrong judgment");
      }
    }
  }
  return std::nullopt;
}

std::string derivation_to_text(const Derivation& d, const TypeStore& store) {
  std::ostringstream out;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    const DerivationNode& n = d.nodes[i];
    out << std::string(2 * depth, ' ') << '#' << i << ' '
        << show_type(store, n.left) << " <= " << show_type(store, n.right);
    if (n.back_edge) {
      out << "  [back to #" << n.target << ", cycle {";
      for (std::size_t k = 0; k < n.cycle_labels.size(); ++k) {
        out << (k ? "," : "") << rule_label(n.cycle_labels[k]);
      }
      out << "}]";
    } else {
      out << "  (" << rule_label(n.rule) << ")";
    }
    out << '\n';
    for (auto p = n.premises.rbegin(); p != n.premises.rend(); ++p) {
      stack.emplace_back(*p, depth + 1);
    }
  }
  return out.str();
}

nlohmann::json derivation_to_json(const Derivation& d, const TypeStore& store) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json back_edges = nlohmann::json::array();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const DerivationNode& n = d.nodes[i];
    nlohmann::json j = {{"id", i},
                        {"left", show_type(store, n.left)},
                        {"right", show_type(store, n.right)},
                        {"rule", rule_label(n.rule)},
                        {"premises", n.premises},
                        {"back_edge", n.back_edge}};
    nodes.push_back(j);
    if (n.back_edge) {
      nlohmann::json labels = nlohmann::json::array();
      for (SubtypeRule r : n.cycle_labels) labels.push_back(rule_label(r));
      back_edges.push_back({{"from", i}, {"to", n.target}, {"labels", labels}});
    }
  }
  return {{"nodes", nodes}, {"back_edges", back_edges}};
}

}  // namespace coinfer
