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

#include "coinfer/emptiness.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "coinfer/canonical.hpp"

namespace coinfer {
namespace {

constexpr std::size_t kNoDep = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kVisitFactor = 1;
constexpr std::size_t kVisitSlack = 16;

}  // namespace

std::size_t PathStack::push(TypeId id, bool is_obj) {
  std::int64_t below = entries_.empty() ? -1 : entries_.back().last_obj;
  std::int64_t pos = static_cast<std::int64_t>(entries_.size());
  entries_.push_back({id, is_obj ? pos : below});
  return entries_.size() - 1;
}

void PathStack::pop() { entries_.pop_back(); }

bool PathStack::is_contractive(std::size_t pos) const {
  return !entries_.empty() &&
         entries_.back().last_obj >= static_cast<std::int64_t>(pos);
}

bool EmptinessChecker::not_empty(TypeId root) {
  // Iterative form of the recursive walk. Every frame carries the lowest
  // path position its result depended on; a result is memoized only when
  // it depends on nothing below its own frame.
  struct Frame {
    TypeId id;
    std::size_t pos;
    std::size_t next = 0;
    std::size_t dep = kNoDep;
  };
  PathStack path;
  std::unordered_map<TypeId, std::size_t> on_path;
  std::vector<Frame> frames;
  last_visits_ = 0;
  // Results that depend on an ancestor are not cached, so some graphs make
  // the walk revisit subgraphs exponentially often. Past a budget linear in
  // the edges seen so far, hand the whole query to the component solver.
  std::unordered_set<TypeId> opened;
  std::size_t edges_seen = 0;

  bool result = false;
  std::size_t result_dep = kNoDep;
  bool have_result = false;

  // Visit `t`: either answer immediately or open a frame.
  auto visit = [&](TypeId t) {
    ++last_visits_;
    if (auto m = memo_.find(t); m != memo_.end()) {
      result = m->second;
      result_dep = kNoDep;
      have_result = true;
      return;
    }
    const TypeNode& n = store_.node(t);
    if (n.kind == TypeKind::kInt) {
      result = true;
      result_dep = kNoDep;
      have_result = true;
      return;
    }
    if (n.kind == TypeKind::kPending) throw std::logic_error("pending type node");
    if (auto p = on_path.find(t); p != on_path.end()) {
      result = path.is_contractive(p->second);
      result_dep = p->second;
      have_result = true;
      return;
    }
    if (opened.insert(t).second) {
      edges_seen += n.kind == TypeKind::kUnion ? 2 : n.fields.size();
    }
    std::size_t pos = path.push(t, n.kind == TypeKind::kObj);
    on_path.emplace(t, pos);
    frames.push_back({t, pos});
    have_result = false;
  };

  auto finish = [&](bool res) {
    Frame f = frames.back();
    frames.pop_back();
    path.pop();
    on_path.erase(f.id);
    if (f.dep >= f.pos) {
      memo_[f.id] = res;
      f.dep = kNoDep;
    }
    result = res;
    result_dep = f.dep;
    have_result = true;
  };

  visit(root);
  while (!frames.empty()) {
    if (last_visits_ > kVisitFactor * edges_seen + kVisitSlack) {
      return solve_by_components(root);
    }
    Frame& f = frames.back();
    const TypeNode& n = store_.node(f.id);
    if (have_result) {
      // A child just answered.
      f.dep = std::min(f.dep, result_dep);
      have_result = false;
      bool done = n.kind == TypeKind::kUnion ? (result || f.next == 2)
                                             : (!result || f.next == n.fields.size());
      if (done) {
        finish(result);
        continue;
      }
    }
    if (n.kind == TypeKind::kObj && n.fields.empty()) {
      finish(true);
      continue;
    }
    TypeId child = n.kind == TypeKind::kUnion
                       ? (f.next == 0 ? n.left : n.right)
                       : n.fields[f.next].type;
    ++f.next;
    visit(child);
  }
  return result;
}

// Linear-time variant. Collapse the strongly connected components of the
// union-only subgraph: inside one, every member reaches every exit through
// unions alone. What remains is a game graph without union cycles, where a
// node is empty iff the adversary (choosing an obj field) can force a
// component without exits. That is an attractor, computed with counters.
bool EmptinessChecker::solve_by_components(TypeId root) {
  std::vector<TypeId> nodes = subterm_closure(store_, root);
  const std::size_t n = nodes.size();
  std::unordered_map<TypeId, std::size_t> index;
  index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index.emplace(nodes[i], i);
  auto is_union = [&](std::size_t i) { return store_.node(nodes[i]).kind == TypeKind::kUnion; };

  // Tarjan over union -> union edges, iteratively.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(n, kUnset), low(n, 0), order(n, kUnset);
  std::vector<std::size_t> stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0;
  std::size_t comps = 0;
  struct Visit {
    std::size_t node;
    int next;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (!is_union(s) || order[s] != kUnset) continue;
    std::vector<Visit> calls{{s, 0}};
    order[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!calls.empty()) {
      Visit& c = calls.back();
      const TypeNode& u = store_.node(nodes[c.node]);
      if (c.next < 2) {
        std::size_t w = index.at(c.next == 0 ? u.left : u.right);
        ++c.next;
        ++last_visits_;
        if (!is_union(w)) continue;
        if (order[w] == kUnset) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[c.node] = std::min(low[c.node], order[w]);
        }
        continue;
      }
      std::size_t v = c.node;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().node] = std::min(low[calls.back().node], low[v]);
      if (low[v] == order[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }

  // Game vertices: non-union nodes keep their index, components follow.
  auto vertex = [&](std::size_t i) { return is_union(i) ? n + comp[i] : i; };
  const std::size_t m = n + comps;
  std::vector<std::vector<std::size_t>> preds(m);
  std::vector<std::size_t> exits(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const TypeNode& node = store_.node(nodes[i]);
    if (node.kind == TypeKind::kInt) continue;
    std::size_t from = vertex(i);
    for (TypeId child : node.children()) {
      ++last_visits_;
      std::size_t to = vertex(index.at(child));
      if (to == from) continue;
      preds[to].push_back(from);
      ++exits[from];
    }
  }

  std::vector<bool> losing(m, false);
  std::vector<std::size_t> queue;
  for (std::size_t c = n; c < m; ++c) {
    if (exits[c] == 0) {
      losing[c] = true;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t p : preds[v]) {
      ++last_visits_;
      if (losing[p]) continue;
      // obj: one empty field suffices; component: every exit must be empty.
      if (p < n || --exits[p] == 0) {
        losing[p] = true;
        queue.push_back(p);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) memo_[nodes[i]] = !losing[vertex(i)];
  return !losing[vertex(0)];
}

std::unordered_set<TypeId> EmptinessChecker::nonempty_set(TypeId t) {
  std::unordered_set<TypeId> out;
  std::vector<TypeId> nodes = subterm_closure(store_, t);
  // Visiting leaves first lets most queries hit the memo.
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (not_empty(*it)) out.insert(*it);
  }
  return out;
}

std::optional<ValueId> EmptinessChecker::witness(TypeId t, ValueStore& values) {
  if (!not_empty(t)) return std::nullopt;
  std::unordered_set<TypeId> ne = nonempty_set(t);
  std::vector<TypeId> nodes = subterm_closure(store_, t);

  // Distance, through unions only, to a non-empty non-union node. Following
  // the child with the smaller distance cannot loop among unions.
  std::unordered_map<TypeId, std::size_t> dist;
  std::unordered_map<TypeId, std::vector<TypeId>> union_parents;
  std::deque<TypeId> queue;
  for (TypeId id : nodes) {
    if (!ne.contains(id)) continue;
    const TypeNode& n = store_.node(id);
    if (n.kind == TypeKind::kUnion) {
      union_parents[n.left].push_back(id);
      union_parents[n.right].push_back(id);
    } else {
      dist[id] = 0;
      queue.push_back(id);
    }
  }
  while (!queue.empty()) {
    TypeId x = queue.front();
    queue.pop_front();
    for (TypeId p : union_parents[x]) {
      if (!ne.contains(p) || dist.contains(p)) continue;
      dist[p] = dist[x] + 1;
      queue.push_back(p);
    }
  }
  auto base = [&](TypeId id) {
    while (store_.node(id).kind == TypeKind::kUnion) {
      const TypeNode& n = store_.node(id);
      auto dl = dist.find(n.left);
      auto dr = dist.find(n.right);
      if (dl == dist.end()) {
        id = n.right;
      } else if (dr == dist.end() || dl->second <= dr->second) {
        id = n.left;
      } else {
        id = n.right;
      }
    }
    return id;
  };

  std::unordered_map<TypeId, ValueId> made;
  std::vector<TypeId> todo;
  auto value_for = [&](TypeId id) {
    TypeId b = base(id);
    if (auto it = made.find(b); it != made.end()) return it->second;
    ValueId v = store_.node(b).kind == TypeKind::kInt ? values.make_int(0)
                                                      : values.reserve();
    made.emplace(b, v);
    if (store_.node(b).kind == TypeKind::kObj) todo.push_back(b);
    return v;
  };
  ValueId root = value_for(t);
  while (!todo.empty()) {
    TypeId b = todo.back();
    todo.pop_back();
    const TypeNode n = store_.node(b);
    ValueNode shape;
    shape.kind = ValueKind::kObj;
    shape.class_name = n.class_name;
    for (const auto& f : n.fields) shape.fields.push_back({f.name, value_for(f.type)});
    values.define(made.at(b), std::move(shape));
  }
  return canonicalize(values, root);
}

}  // namespace coinfer
