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

#include "coinfer/engine.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "coinfer/subtyping.hpp"

namespace coinfer {
namespace {

using CellId = std::uint32_t;

enum class Tag : std::uint8_t { kRef, kAtom, kInt, kStruct };

struct Cell {
  Tag tag = Tag::kRef;
  std::uint32_t sym = 0;    // atom or functor
  std::uint32_t arity = 0;  // kStruct
  std::uint32_t first = 0;  // kRef: target (self when unbound); kStruct: args offset
  std::int64_t num = 0;     // kInt
};

class Symbols {
 public:
  std::uint32_t intern(const std::string& s) {
    auto [it, fresh] = ids_.emplace(s, static_cast<std::uint32_t>(names_.size()));
    if (fresh) names_.push_back(s);
    return it->second;
  }
  const std::string& name(std::uint32_t id) const { return names_[id]; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

// Term cells with a trail of bindings, so that every change made after a
// mark can be undone.
class Heap {
 public:
  struct Mark {
    std::size_t cells;
    std::size_t args;
    std::size_t trail;
  };

  CellId new_var() {
    CellId id = static_cast<CellId>(cells_.size());
    Cell c;
    c.tag = Tag::kRef;
    c.first = id;
    cells_.push_back(c);
    return id;
  }
  CellId new_atom(std::uint32_t sym) {
    Cell c;
    c.tag = Tag::kAtom;
    c.sym = sym;
    cells_.push_back(c);
    return static_cast<CellId>(cells_.size() - 1);
  }
  CellId new_int(std::int64_t v) {
    Cell c;
    c.tag = Tag::kInt;
    c.num = v;
    cells_.push_back(c);
    return static_cast<CellId>(cells_.size() - 1);
  }
  CellId new_struct(std::uint32_t sym, const std::vector<CellId>& args) {
    Cell c;
    c.tag = Tag::kStruct;
    c.sym = sym;
    c.arity = static_cast<std::uint32_t>(args.size());
    c.first = static_cast<std::uint32_t>(args_.size());
    args_.insert(args_.end(), args.begin(), args.end());
    cells_.push_back(c);
    return static_cast<CellId>(cells_.size() - 1);
  }

  const Cell& cell(CellId id) const { return cells_[id]; }
  CellId arg(CellId s, std::uint32_t i) const { return args_[cells_[s].first + i]; }

  CellId deref(CellId id) const {
    while (cells_[id].tag == Tag::kRef && cells_[id].first != id) id = cells_[id].first;
    return id;
  }
  bool is_unbound(CellId id) const {
    return cells_[id].tag == Tag::kRef && cells_[id].first == id;
  }

  Mark mark() const { return {cells_.size(), args_.size(), trail_.size()}; }
  void undo(const Mark& m) {
    while (trail_.size() > m.trail) {
      CellId v = trail_.back();
      trail_.pop_back();
      if (v < cells_.size()) cells_[v].first = v;
    }
    cells_.resize(m.cells);
    args_.resize(m.args);
  }

  // Rational-tree unification: a pair of structs already being unified is
  // assumed equal, which makes cyclic terms terminate.
  bool unify(CellId a, CellId b) {
    std::vector<std::pair<CellId, CellId>> stack{{a, b}};
    std::unordered_set<std::uint64_t> assumed;
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      x = deref(x);
      y = deref(y);
      if (x == y) continue;
      const Cell& cx = cells_[x];
      const Cell& cy = cells_[y];
      if (cx.tag == Tag::kRef || cy.tag == Tag::kRef) {
        // Bind the younger variable so older (query) variables stay roots.
        if (cx.tag == Tag::kRef && (cy.tag != Tag::kRef || x > y)) {
          bind(x, y);
        } else {
          bind(y, x);
        }
        continue;
      }
      if (cx.tag != cy.tag) return false;
      switch (cx.tag) {
        case Tag::kAtom:
          if (cx.sym != cy.sym) return false;
          break;
        case Tag::kInt:
          if (cx.num != cy.num) return false;
          break;
        case Tag::kStruct: {
          if (cx.sym != cy.sym || cx.arity != cy.arity) return false;
          std::uint64_t k = (static_cast<std::uint64_t>(std::min(x, y)) << 32) | std::max(x, y);
          if (!assumed.insert(k).second) break;
          for (std::uint32_t i = 0; i < cx.arity; ++i) {
            stack.emplace_back(args_[cx.first + i], args_[cy.first + i]);
          }
          break;
        }
        case Tag::kRef:
          break;
      }
    }
    return true;
  }

  bool ground(CellId root) const {
    std::unordered_set<CellId> seen;
    std::vector<CellId> stack{root};
    while (!stack.empty()) {
      CellId c = deref(stack.back());
      stack.pop_back();
      if (!seen.insert(c).second) continue;
      const Cell& cell = cells_[c];
      if (cell.tag == Tag::kRef) return false;
      if (cell.tag == Tag::kStruct) {
        for (std::uint32_t i = 0; i < cell.arity; ++i) stack.push_back(args_[cell.first + i]);
      }
    }
    return true;
  }

 private:
  void bind(CellId var, CellId target) {
    cells_[var].first = target;
    trail_.push_back(var);
  }

  std::vector<Cell> cells_;
  std::vector<CellId> args_;
  std::vector<CellId> trail_;
};

// A clause with variables numbered, ready to be copied onto the heap.
struct Template {
  Tag tag = Tag::kAtom;
  std::uint32_t sym = 0;
  std::int64_t num = 0;
  int var = -1;
  std::vector<Template> args;
};

struct ClauseTemplate {
  Template head;
  std::vector<Template> body;
  int vars = 0;
};

struct Syms {
  std::uint32_t dot, nil, colon, join, obj, int_;
};

}  // namespace

std::map<std::string, std::vector<Variance>> SolverConfig::default_variance() {
  return {{"invoke", {Variance::kInv, Variance::kInv, Variance::kContra, Variance::kCo}},
          {"rec_acc", {Variance::kContra, Variance::kInv, Variance::kCo}}};
}

struct Engine::Impl {
  Symbols symbols;
  Syms s{};
  std::vector<ClauseTemplate> templates;
  std::unordered_map<std::string, std::vector<std::size_t>> by_predicate;

  // Per-solve state.
  Heap heap;
  const SolverConfig* config = nullptr;
  TypeStore* types = nullptr;
  std::unique_ptr<SubtypeSolver> subtyping;
  struct GoalNode {
    CellId atom;
    int anc;
    int next;
  };
  struct AncNode {
    CellId atom;
    int parent;
    std::size_t depth;
  };
  std::vector<GoalNode> goals;
  std::vector<AncNode> ancestors;
  std::size_t limit = 0;
  bool depth_hit = false;
  std::size_t steps = 0;
  std::vector<Obligation> obligations;
  std::vector<Answer> answers;
  std::set<std::string> answer_keys;
  CellId query_atom = 0;
  std::vector<std::pair<std::string, CellId>> query_vars;

  explicit Impl(const std::vector<HornClause>& clauses) {
    s.dot = symbols.intern(".");
    s.nil = symbols.intern("[]");
    s.colon = symbols.intern(":");
    s.join = symbols.intern("\\/");
    s.obj = symbols.intern("obj");
    s.int_ = symbols.intern("int");
    for (const auto& c : clauses) {
      ClauseTemplate t;
      std::unordered_map<std::string, int> vars;
      t.head = compile(c.head, vars);
      for (const auto& a : c.body) t.body.push_back(compile(a, vars));
      t.vars = static_cast<int>(vars.size());
      by_predicate[key(c.head.predicate, c.head.args.size())].push_back(templates.size());
      templates.push_back(std::move(t));
    }
  }

  static std::string key(const std::string& pred, std::size_t arity) {
    return pred + "/" + std::to_string(arity);
  }

  Template compile(const Term& t, std::unordered_map<std::string, int>& vars) {
    Template out;
    switch (t.kind) {
      case Term::Kind::kVar: {
        auto [it, fresh] = vars.emplace(t.name, static_cast<int>(vars.size()));
        out.tag = Tag::kRef;
        out.var = it->second;
        break;
      }
      case Term::Kind::kAtom:
        out.tag = Tag::kAtom;
        out.sym = symbols.intern(t.name);
        break;
      case Term::Kind::kInt:
        out.tag = Tag::kInt;
        out.num = t.value;
        break;
      case Term::Kind::kCompound:
        out.tag = Tag::kStruct;
        out.sym = symbols.intern(t.name);
        for (const auto& a : t.args) out.args.push_back(compile(a, vars));
        break;
    }
    return out;
  }

  Template compile(const Atom& a, std::unordered_map<std::string, int>& vars) {
    return compile(a.args.empty() ? Term::atom(a.predicate)
                                  : Term::compound(a.predicate, a.args),
                   vars);
  }

  CellId instantiate(const Template& t, std::vector<CellId>& vars) {
    switch (t.tag) {
      case Tag::kRef:
        if (vars[t.var] == UINT32_MAX) vars[t.var] = heap.new_var();
        return vars[t.var];
      case Tag::kAtom:
        return heap.new_atom(t.sym);
      case Tag::kInt:
        return heap.new_int(t.num);
      case Tag::kStruct: {
        std::vector<CellId> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(instantiate(a, vars));
        return heap.new_struct(t.sym, args);
      }
    }
    return 0;
  }

  CellId build(const Term& t, std::map<std::string, CellId>& vars) {
    switch (t.kind) {
      case Term::Kind::kVar: {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        CellId v = heap.new_var();
        vars.emplace(t.name, v);
        query_vars.emplace_back(t.name, v);
        return v;
      }
      case Term::Kind::kAtom:
        return heap.new_atom(symbols.intern(t.name));
      case Term::Kind::kInt:
        return heap.new_int(t.value);
      case Term::Kind::kCompound: {
        std::vector<CellId> args;
        for (const auto& a : t.args) args.push_back(build(a, vars));
        return heap.new_struct(symbols.intern(t.name), args);
      }
    }
    return 0;
  }

  CellId build(const Atom& a, std::map<std::string, CellId>& vars) {
    return build(a.args.empty() ? Term::atom(a.predicate) : Term::compound(a.predicate, a.args),
                 vars);
  }

  // ---- types --------------------------------------------------------------

  // Proper list cells, or nothing for partial or cyclic lists.
  std::optional<std::vector<CellId>> list_items(CellId c) const {
    std::vector<CellId> items;
    std::unordered_set<CellId> seen;
    c = heap.deref(c);
    while (true) {
      const Cell& cell = heap.cell(c);
      if (cell.tag == Tag::kAtom && cell.sym == s.nil) return items;
      if (cell.tag != Tag::kStruct || cell.sym != s.dot || cell.arity != 2) return std::nullopt;
      if (!seen.insert(c).second) return std::nullopt;
      items.push_back(heap.arg(c, 0));
      c = heap.deref(heap.arg(c, 1));
    }
  }

  bool is_type(CellId root) const {
    std::unordered_set<CellId> seen;
    std::vector<CellId> stack{root};
    while (!stack.empty()) {
      CellId c = heap.deref(stack.back());
      stack.pop_back();
      if (!seen.insert(c).second) continue;
      const Cell& cell = heap.cell(c);
      if (cell.tag == Tag::kAtom && cell.sym == s.int_) continue;
      if (cell.tag != Tag::kStruct || cell.arity != 2) return false;
      if (cell.sym == s.join) {
        stack.push_back(heap.arg(c, 0));
        stack.push_back(heap.arg(c, 1));
        continue;
      }
      if (cell.sym != s.obj) return false;
      if (heap.cell(heap.deref(heap.arg(c, 0))).tag != Tag::kAtom) return false;
      auto items = list_items(heap.arg(c, 1));
      if (!items) return false;
      std::set<std::uint32_t> names;
      for (CellId e : *items) {
        CellId d = heap.deref(e);
        const Cell& ec = heap.cell(d);
        if (ec.tag != Tag::kStruct || ec.sym != s.colon || ec.arity != 2) return false;
        const Cell& f = heap.cell(heap.deref(heap.arg(d, 0)));
        if (f.tag != Tag::kAtom || !names.insert(f.sym).second) return false;
        stack.push_back(heap.arg(d, 1));
      }
    }
    return true;
  }

  std::optional<TypeId> to_type(CellId root) {
    if (!is_type(root)) return std::nullopt;
    std::unordered_map<CellId, TypeId> made;
    std::vector<CellId> todo;
    auto node_for = [&](CellId c) {
      c = heap.deref(c);
      if (auto it = made.find(c); it != made.end()) return it->second;
      const Cell& cell = heap.cell(c);
      TypeId id = cell.tag == Tag::kAtom ? types->make_int() : types->reserve();
      made.emplace(c, id);
      if (cell.tag == Tag::kStruct) todo.push_back(c);
      return id;
    };
    TypeId out = node_for(root);
    while (!todo.empty()) {
      CellId c = todo.back();
      todo.pop_back();
      const Cell cell = heap.cell(c);
      TypeNode n;
      if (cell.sym == s.join) {
        n.kind = TypeKind::kUnion;
        n.left = node_for(heap.arg(c, 0));
        n.right = node_for(heap.arg(c, 1));
      } else {
        n.kind = TypeKind::kObj;
        n.class_name = symbols.name(heap.cell(heap.deref(heap.arg(c, 0))).sym);
        std::vector<CellId> entries = *list_items(heap.arg(c, 1));
        for (CellId e : entries) {
          CellId d = heap.deref(e);
          n.fields.push_back({symbols.name(heap.cell(heap.deref(heap.arg(d, 0))).sym),
                              node_for(heap.arg(d, 1))});
        }
      }
      types->define(made.at(c), std::move(n));
    }
    return out;
  }

  // A type, or a proper list of types.
  std::optional<std::vector<TypeId>> to_types(CellId c, bool& is_list) {
    if (auto t = to_type(c)) {
      is_list = false;
      return std::vector<TypeId>{*t};
    }
    auto items = list_items(c);
    if (!items) return std::nullopt;
    std::vector<TypeId> out;
    for (CellId e : *items) {
      auto t = to_type(e);
      if (!t) return std::nullopt;
      out.push_back(*t);
    }
    is_list = true;
    return out;
  }

  // ---- resolution ---------------------------------------------------------

  bool same_predicate(CellId a, CellId b) const {
    const Cell& x = heap.cell(a);
    const Cell& y = heap.cell(b);
    return x.tag == y.tag && x.sym == y.sym && x.arity == y.arity;
  }

  // Checks one ancestor/current argument pair under `v`; sets `used` when a
  // subtype check (rather than unification) decided it.
  bool covers(Variance v, CellId anc, CellId cur, bool& used) {
    if (v == Variance::kInv || !heap.ground(anc) || !heap.ground(cur)) {
      return heap.unify(anc, cur);
    }
    bool anc_list = false;
    bool cur_list = false;
    auto ta = to_types(anc, anc_list);
    auto tc = to_types(cur, cur_list);
    if (!ta || !tc) return heap.unify(anc, cur);
    if (anc_list != cur_list || ta->size() != tc->size()) return false;
    for (std::size_t i = 0; i < ta->size(); ++i) {
      TypeId sub = v == Variance::kContra ? (*tc)[i] : (*ta)[i];
      TypeId super = v == Variance::kContra ? (*ta)[i] : (*tc)[i];
      if (!subtyping->subtype(sub, super)) return false;
      obligations.push_back({sub, super});
    }
    used = true;
    return true;
  }

  bool subsumes(CellId anc, CellId cur, const std::vector<Variance>& variance) {
    const Cell& c = heap.cell(cur);
    if (variance.size() != c.arity) return false;
    bool used = false;
    for (std::uint32_t i = 0; i < c.arity; ++i) {
      if (!covers(variance[i], heap.arg(anc, i), heap.arg(cur, i), used)) return false;
    }
    return used;
  }

  // Variants of `atom` in which a contravariant record argument is narrowed
  // to an order-preserving selection of `keep` of its entries.
  void record_narrowings(CellId atom, const ClauseTemplate& t,
                         const std::vector<Variance>& variance,
                         std::vector<CellId>& out) {
    const Cell cell = heap.cell(atom);
    for (std::uint32_t i = 0; i < cell.arity && i < variance.size(); ++i) {
      if (variance[i] != Variance::kContra) continue;
      // Head pattern: a proper list of k entries.
      std::size_t k = 0;
      const Template* p = &t.head.args[i];
      while (p->tag == Tag::kStruct && p->sym == s.dot && p->args.size() == 2) {
        const Template& e = p->args[0];
        if (e.tag != Tag::kStruct || e.sym != s.colon) {
          k = 0;
          break;
        }
        ++k;
        p = &p->args[1];
      }
      if (k == 0 || p->tag != Tag::kAtom || p->sym != s.nil) continue;
      auto items = list_items(heap.arg(atom, i));
      if (!items || items->size() <= k) continue;
      bool records = std::all_of(items->begin(), items->end(), [&](CellId e) {
        const Cell& ec = heap.cell(heap.deref(e));
        return ec.tag == Tag::kStruct && ec.sym == s.colon && ec.arity == 2;
      });
      if (!records) continue;
      std::vector<bool> pick(items->size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        CellId list = heap.new_atom(s.nil);
        for (std::size_t j = items->size(); j-- > 0;) {
          if (pick[j]) list = heap.new_struct(s.dot, {(*items)[j], list});
        }
        std::vector<CellId> args;
        for (std::uint32_t a = 0; a < cell.arity; ++a) {
          args.push_back(a == i ? list : heap.arg(atom, a));
        }
        out.push_back(heap.new_struct(cell.sym, args));
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }

  int push_goals(const std::vector<CellId>& atoms, int anc, int rest) {
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
      goals.push_back({*it, anc, rest});
      rest = static_cast<int>(goals.size() - 1);
    }
    return rest;
  }

  // Returns true to stop the search.
  bool step(int goal) {
    if (goal < 0) return record_answer();
    GoalNode g = goals[goal];
    std::size_t depth = g.anc < 0 ? 0 : ancestors[g.anc].depth + 1;
    if (depth >= limit) {
      depth_hit = true;
      return false;
    }
    ++steps;
    CellId atom = heap.deref(g.atom);
    const Cell& ac = heap.cell(atom);
    std::string pred = symbols.name(ac.sym);
    std::size_t arity = ac.tag == Tag::kStruct ? ac.arity : 0;
    std::size_t goal_mark = goals.size();
    std::size_t anc_mark = ancestors.size();

    if (config->coinduction_enabled) {
      for (int a = g.anc; a >= 0; a = ancestors[a].parent) {
        if (!same_predicate(ancestors[a].atom, atom)) continue;
        Heap::Mark m = heap.mark();
        if (heap.unify(ancestors[a].atom, atom) && step(g.next)) return true;
        heap.undo(m);
      }
    }
    const std::vector<Variance>* variance = nullptr;
    if (auto it = config->variance.find(pred);
        it != config->variance.end() && it->second.size() == arity && arity > 0) {
      variance = &it->second;
    }
    if (config->subsumption_enabled && variance != nullptr) {
      for (int a = g.anc; a >= 0; a = ancestors[a].parent) {
        if (!same_predicate(ancestors[a].atom, atom)) continue;
        Heap::Mark m = heap.mark();
        if (subsumes(ancestors[a].atom, atom, *variance) && step(g.next)) return true;
        heap.undo(m);
      }
    }
    auto found = by_predicate.find(key(pred, arity));
    if (found != by_predicate.end()) {
      ancestors.push_back({atom, g.anc, depth});
      int self = static_cast<int>(ancestors.size() - 1);
      for (std::size_t ci : found->second) {
        const ClauseTemplate& t = templates[ci];
        Heap::Mark m = heap.mark();
        std::vector<CellId> targets{atom};
        if (config->subsumption_enabled && variance != nullptr) {
          record_narrowings(atom, t, *variance, targets);
        }
        for (CellId target : targets) {
          Heap::Mark inner = heap.mark();
          std::vector<CellId> vars(static_cast<std::size_t>(t.vars), UINT32_MAX);
          CellId head = instantiate(t.head, vars);
          if (heap.unify(head, target)) {
            std::vector<CellId> body;
            for (const auto& b : t.body) body.push_back(instantiate(b, vars));
            int next = push_goals(body, self, g.next);
            if (step(next)) return true;
            goals.resize(goal_mark);
          }
          heap.undo(inner);
        }
        heap.undo(m);
      }
      ancestors.resize(anc_mark);
    }
    return false;
  }

  // ---- answers ------------------------------------------------------------

  struct Renderer {
    const Impl& impl;
    std::unordered_map<CellId, std::string> names;
    std::vector<CellId> named;
    std::set<std::string> taken;

    // Names every struct cell that closes a cycle.
    void plan(const std::vector<CellId>& roots) {
      std::unordered_map<CellId, int> colour;
      for (CellId r : roots) {
        std::vector<std::pair<CellId, std::uint32_t>> stack;
        auto enter = [&](CellId c) {
          c = impl.heap.deref(c);
          int& col = colour[c];
          if (col == 1) {
            name(c);
          } else if (col == 0) {
            col = 1;
            stack.emplace_back(c, 0);
          }
        };
        enter(r);
        while (!stack.empty()) {
          auto& [c, i] = stack.back();
          const Cell& cell = impl.heap.cell(c);
          if (cell.tag != Tag::kStruct || i == cell.arity) {
            colour[c] = 2;
            stack.pop_back();
            continue;
          }
          CellId child = impl.heap.arg(c, i++);
          enter(child);
        }
      }
    }

    void name(CellId c) {
      if (names.contains(c)) return;
      std::string n;
      std::size_t k = named.size();
      do {
        n = "T" + std::to_string(k++);
      } while (taken.contains(n));
      taken.insert(n);
      names.emplace(c, n);
      named.push_back(c);
    }

    std::string var_name(CellId c) const {
      for (const auto& [n, v] : impl.query_vars) {
        if (impl.heap.deref(v) == c) return n;
      }
      return "_G" + std::to_string(c);
    }

    std::string ref(CellId c, bool union_left) const {
      c = impl.heap.deref(c);
      if (auto it = names.find(c); it != names.end()) return it->second;
      return body(c, union_left);
    }

    std::string body(CellId c, bool union_left) const {
      c = impl.heap.deref(c);
      const Cell& cell = impl.heap.cell(c);
      const Syms& s = impl.s;
      switch (cell.tag) {
        case Tag::kRef:
          return var_name(c);
        case Tag::kAtom:
          return impl.symbols.name(cell.sym);
        case Tag::kInt:
          return std::to_string(cell.num);
        case Tag::kStruct:
          break;
      }
      if (cell.sym == s.dot && cell.arity == 2) {
        std::string out = "[" + ref(impl.heap.arg(c, 0), false);
        CellId t = impl.heap.deref(impl.heap.arg(c, 1));
        while (!names.contains(t) && impl.heap.cell(t).tag == Tag::kStruct &&
               impl.heap.cell(t).sym == s.dot && impl.heap.cell(t).arity == 2) {
          out += "," + ref(impl.heap.arg(t, 0), false);
          t = impl.heap.deref(impl.heap.arg(t, 1));
        }
        const Cell& tc = impl.heap.cell(t);
        if (names.contains(t) || !(tc.tag == Tag::kAtom && tc.sym == s.nil)) {
          out += "|" + ref(t, false);
        }
        return out + "]";
      }
      if (cell.sym == s.colon && cell.arity == 2) {
        return ref(impl.heap.arg(c, 0), true) + ":" + ref(impl.heap.arg(c, 1), false);
      }
      if (cell.sym == s.join && cell.arity == 2) {
        std::string out =
            ref(impl.heap.arg(c, 0), true) + " \\/ " + ref(impl.heap.arg(c, 1), false);
        return union_left ? "(" + out + ")" : out;
      }
      std::string out = impl.symbols.name(cell.sym) + "(";
      for (std::uint32_t i = 0; i < cell.arity; ++i) {
        if (i) out += ",";
        out += ref(impl.heap.arg(c, i), false);
      }
      return out + ")";
    }
  };

  Answer make_answer(const std::vector<std::pair<std::string, CellId>>& shown,
                     CellId instance_root, std::optional<CellId> result) {
    Renderer r{*this, {}, {}, {}};
    for (const auto& [n, v] : query_vars) r.taken.insert(n);
    std::vector<CellId> roots{instance_root};
    for (const auto& [n, v] : shown) roots.push_back(v);
    r.plan(roots);
    Answer a;
    for (const auto& [n, v] : shown) a.bindings.emplace_back(n, r.ref(v, false));
    for (CellId c : r.named) a.equations.emplace_back(r.names.at(c), r.body(c, false));
    a.instance = r.ref(instance_root, false);
    if (!a.equations.empty()) {
      a.instance += " where ";
      for (std::size_t i = 0; i < a.equations.size(); ++i) {
        if (i) a.instance += " ; ";
        a.instance += a.equations[i].first + " = " + a.equations[i].second;
      }
    }
    if (result && heap.ground(*result)) a.result_type = to_type(*result);
    return a;
  }

  std::vector<std::pair<std::string, CellId>> shown_vars;

  bool record_answer() {
    const Cell& q = heap.cell(heap.deref(query_atom));
    std::optional<CellId> result;
    if (q.tag == Tag::kStruct && q.arity > 0) result = heap.arg(heap.deref(query_atom), q.arity - 1);
    Answer a = make_answer(shown_vars, query_atom, result);
    if (answer_keys.insert(a.instance).second) answers.push_back(std::move(a));
    return answers.size() >= config->max_answers;
  }
};

Engine::Engine(std::vector<HornClause> clauses)
    : clauses_(std::move(clauses)), impl_(std::make_unique<Impl>(clauses_)) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

SolveResult Engine::solve(const Query& query, const SolverConfig& config, TypeStore& types) {
  Impl& im = *impl_;
  im.config = &config;
  im.types = &types;
  SubtypeConfig sc;
  sc.memo_limit = config.memo_limit;
  im.subtyping = std::make_unique<SubtypeSolver>(types, sc);
  SolveResult result;
  std::size_t limit = std::min(std::max<std::size_t>(config.initial_depth, 1), config.max_depth);
  while (true) {
    im.heap = Heap();
    im.goals.clear();
    im.ancestors.clear();
    im.answers.clear();
    im.answer_keys.clear();
    im.query_vars.clear();
    im.obligations.clear();
    im.depth_hit = false;
    im.limit = limit;

    std::map<std::string, CellId> vars;
    im.query_atom = im.build(query.goal, vars);
    im.shown_vars = im.query_vars;
    bool consistent = true;
    std::set<std::string> where_vars;
    for (const auto& [v, t] : query.where) {
      where_vars.insert(v);
      auto it = vars.find(v);
      CellId var = it != vars.end() ? it->second : im.build(Term::var(v), vars);
      CellId rhs = im.build(t, vars);
      consistent = consistent && im.heap.unify(var, rhs);
    }
    std::erase_if(im.shown_vars, [&](const auto& p) { return where_vars.contains(p.first); });
    if (consistent) {
      im.goals.push_back({im.query_atom, -1, -1});
      im.step(0);
    }
    result.steps += im.steps;
    im.steps = 0;
    result.depth = limit;
    if (!im.answers.empty()) {
      result.status = SolveStatus::kAnswers;
      result.answers = std::move(im.answers);
      break;
    }
    if (!im.depth_hit) {
      result.status = SolveStatus::kNoAnswers;
      break;
    }
    if (limit >= config.max_depth) {
      result.status = SolveStatus::kDepthExhausted;
      break;
    }
    limit = std::min(limit * 2, config.max_depth);
  }
  result.obligations = std::move(im.obligations);
  im.subtyping.reset();
  return result;
}

std::string Answer::to_text() const {
  std::string out;
  for (const auto& [n, t] : bindings) out += n + " = " + t + "\n";
  for (const auto& [n, t] : equations) out += "  " + n + " = " + t + "\n";
  if (bindings.empty()) out += "yes\n";
  return out;
}

nlohmann::json Answer::to_json() const {
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [n, t] : bindings) b[n] = t;
  nlohmann::json e = nlohmann::json::object();
  for (const auto& [n, t] : equations) e[n] = t;
  return {{"bindings", b}, {"equations", e}, {"instance", instance}};
}

bool check_answer(const Answer& answer, TypeStore& types, TypeId expected) {
  if (!answer.result_type) {
    throw std::invalid_argument("answer result is not a ground type");
  }
  SubtypeSolver solver(types);
  return solver.subtype(*answer.result_type, expected);
}

std::optional<Answer> unify_rational(const Term& a, const Term& b) {
  Engine::Impl im({});
  std::map<std::string, CellId> vars;
  CellId x = im.build(a, vars);
  CellId y = im.build(b, vars);
  if (!im.heap.unify(x, y)) return std::nullopt;
  std::vector<std::pair<std::string, CellId>> shown = im.query_vars;
  CellId pair = im.heap.new_struct(im.symbols.intern("="), {x, y});
  return im.make_answer(shown, pair, std::nullopt);
}

}  // namespace coinfer
