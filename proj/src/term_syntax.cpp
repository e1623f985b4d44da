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

#include "coinfer/term_syntax.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "coinfer/canonical.hpp"
#include "lexer.hpp"

namespace coinfer {
namespace {

using detail::Tok;
using detail::TokenCursor;

class SystemParser {
 public:
  SystemParser(std::string_view source, bool is_value)
      : cur_(detail::tokenize(source)), is_value_(is_value) {}

  EquationSystem parse() {
    EquationSystem sys;
    sys.is_value = is_value_;
    std::map<std::string, SourcePos> declared;
    while (cur_.peek().kind == Tok::kVar) {
      SourcePos pos = cur_.peek().pos;
      std::string name = cur_.next().text;
      if (!declared.emplace(name, pos).second) {
        throw ParseError("duplicate binding for '" + name + "'", pos);
      }
      cur_.expect("=");
      TermExpr rhs = expr();
      cur_.expect(";");
      sys.bindings.emplace_back(std::move(name), std::move(rhs));
    }
    if (!cur_.is_word("root")) cur_.fail("expected a binding or 'root'");
    cur_.next();
    SourcePos root_pos = cur_.peek().pos;
    sys.root = cur_.expect_kind(Tok::kVar, "root variable");
    cur_.accept(";");
    if (!cur_.at_end()) cur_.fail("expected end of input after root");

    for (const auto& [name, rhs] : sys.bindings) check_bound(rhs, declared);
    if (!declared.contains(sys.root)) {
      throw ParseError("unbound variable '" + sys.root + "'", root_pos);
    }
    check_aliases(sys, declared);
    return sys;
  }

 private:
  TermExpr expr() {
    TermExpr left = primary();
    if (!is_value_ && cur_.is("\\/")) {
      SourcePos pos = cur_.next().pos;
      TermExpr u;
      u.kind = TermExpr::Kind::kUnion;
      u.pos = pos;
      u.operands.push_back(std::move(left));
      u.operands.push_back(expr());
      return u;
    }
    return left;
  }

  TermExpr primary() {
    TermExpr e;
    e.pos = cur_.peek().pos;
    const auto& t = cur_.peek();
    if (t.kind == Tok::kVar) {
      e.kind = TermExpr::Kind::kVar;
      e.name = cur_.next().text;
      return e;
    }
    if (!is_value_ && cur_.accept("(")) {
      e = expr();
      cur_.expect(")");
      return e;
    }
    if (is_value_ && (t.kind == Tok::kInt || cur_.is("-") || cur_.is("+"))) {
      e.kind = TermExpr::Kind::kLiteral;
      e.literal = integer();
      return e;
    }
    if (!is_value_ && cur_.is_word("int")) {
      cur_.next();
      e.kind = TermExpr::Kind::kInt;
      return e;
    }
    if (cur_.is_word("obj")) {
      cur_.next();
      e.kind = TermExpr::Kind::kObj;
      cur_.expect("(");
      e.name = cur_.expect_kind(Tok::kIdent, "class name");
      cur_.expect(",");
      cur_.expect("[");
      std::set<std::string> seen;
      if (!cur_.is("]")) {
        do {
          SourcePos pos = cur_.peek().pos;
          std::string field = cur_.expect_kind(Tok::kIdent, "field name");
          if (!seen.insert(field).second) {
            throw ParseError("duplicate field '" + field + "'", pos);
          }
          cur_.expect(is_value_ ? "->" : ":");
          e.fields.emplace_back(std::move(field), expr());
        } while (cur_.accept(","));
      }
      cur_.expect("]");
      cur_.expect(")");
      return e;
    }
    cur_.fail(is_value_ ? "expected a value" : "expected a type");
  }

  std::int64_t integer() {
    bool negative = false;
    if (cur_.accept("-")) {
      negative = true;
    } else {
      cur_.accept("+");
    }
    SourcePos pos = cur_.peek().pos;
    std::string digits = cur_.expect_kind(Tok::kInt, "integer literal");
    if (negative) digits.insert(digits.begin(), '-');
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size()) {
      throw ParseError("integer literal out of range", pos);
    }
    return v;
  }

  static void check_bound(const TermExpr& e,
                          const std::map<std::string, SourcePos>& declared) {
    if (e.kind == TermExpr::Kind::kVar && !declared.contains(e.name)) {
      throw ParseError("unbound variable '" + e.name + "'", e.pos);
    }
    for (const auto& [f, sub] : e.fields) check_bound(sub, declared);
    for (const auto& sub : e.operands) check_bound(sub, declared);
  }

  // X = Y; Y = X has no unique solution.
  static void check_aliases(const EquationSystem& sys,
                            const std::map<std::string, SourcePos>& declared) {
    std::map<std::string, std::string> alias;
    for (const auto& [name, rhs] : sys.bindings) {
      if (rhs.kind == TermExpr::Kind::kVar) alias[name] = rhs.name;
    }
    for (const auto& [start, unused] : alias) {
      std::set<std::string> seen{start};
      std::string at = start;
      while (alias.contains(at)) {
        at = alias.at(at);
        if (!seen.insert(at).second) {
          throw ParseError("unguarded alias cycle through '" + start + "'",
                           declared.at(start));
        }
      }
    }
  }

  TokenCursor cur_;
  bool is_value_;
};

std::map<std::string, std::string> alias_targets(const EquationSystem& sys) {
  std::map<std::string, std::string> direct;
  for (const auto& [name, rhs] : sys.bindings) {
    if (rhs.kind == TermExpr::Kind::kVar) direct[name] = rhs.name;
  }
  std::map<std::string, std::string> out;
  for (const auto& [name, rhs] : sys.bindings) {
    std::string at = name;
    std::size_t steps = 0;
    while (direct.contains(at)) {
      at = direct.at(at);
      if (++steps > direct.size()) {
        throw std::invalid_argument("alias cycle through '" + name + "'");
      }
    }
    out[name] = at;
  }
  return out;
}

class TypeResolver {
 public:
  TypeResolver(TypeStore& store, const EquationSystem& sys)
      : store_(store), sys_(sys), target_(alias_targets(sys)) {}

  TypeId run() {
    for (const auto& [name, rhs] : sys_.bindings) {
      if (rhs.kind != TermExpr::Kind::kVar) slot_[name] = store_.reserve();
    }
    for (const auto& [name, rhs] : sys_.bindings) {
      if (rhs.kind == TermExpr::Kind::kVar) continue;
      store_.define(slot_.at(name), shape(rhs));
    }
    return var(sys_.root);
  }

 private:
  TypeId var(const std::string& name) { return slot_.at(target_.at(name)); }

  TypeNode shape(const TermExpr& e) {
    TypeNode n;
    switch (e.kind) {
      case TermExpr::Kind::kInt:
        n.kind = TypeKind::kInt;
        break;
      case TermExpr::Kind::kUnion:
        n.kind = TypeKind::kUnion;
        n.left = build(e.operands.at(0));
        n.right = build(e.operands.at(1));
        break;
      case TermExpr::Kind::kObj:
        n.kind = TypeKind::kObj;
        n.class_name = e.name;
        for (const auto& [f, sub] : e.fields) n.fields.push_back({f, build(sub)});
        break;
      default:
        throw std::invalid_argument("not a type expression");
    }
    return n;
  }

  TypeId build(const TermExpr& e) {
    switch (e.kind) {
      case TermExpr::Kind::kVar:
        return var(e.name);
      case TermExpr::Kind::kInt:
        return store_.make_int();
      case TermExpr::Kind::kUnion:
        return store_.make_union(build(e.operands.at(0)), build(e.operands.at(1)));
      case TermExpr::Kind::kObj: {
        std::vector<TypeField> fields;
        for (const auto& [f, sub] : e.fields) fields.push_back({f, build(sub)});
        return store_.make_obj(e.name, std::move(fields));
      }
      default:
        throw std::invalid_argument("integer literal in a type");
    }
  }

  TypeStore& store_;
  const EquationSystem& sys_;
  std::map<std::string, std::string> target_;
  std::map<std::string, TypeId> slot_;
};

class ValueResolver {
 public:
  ValueResolver(ValueStore& store, const EquationSystem& sys)
      : store_(store), sys_(sys), target_(alias_targets(sys)) {}

  ValueId run() {
    for (const auto& [name, rhs] : sys_.bindings) {
      if (rhs.kind != TermExpr::Kind::kVar) slot_[name] = store_.reserve();
    }
    for (const auto& [name, rhs] : sys_.bindings) {
      if (rhs.kind == TermExpr::Kind::kVar) continue;
      store_.define(slot_.at(name), shape(rhs));
    }
    return var(sys_.root);
  }

 private:
  ValueId var(const std::string& name) { return slot_.at(target_.at(name)); }

  ValueNode shape(const TermExpr& e) {
    ValueNode n;
    if (e.kind == TermExpr::Kind::kLiteral) {
      n.kind = ValueKind::kInt;
      n.integer = e.literal;
    } else if (e.kind == TermExpr::Kind::kObj) {
      n.kind = ValueKind::kObj;
      n.class_name = e.name;
      for (const auto& [f, sub] : e.fields) n.fields.push_back({f, build(sub)});
    } else {
      throw std::invalid_argument("not a value expression");
    }
    return n;
  }

  ValueId build(const TermExpr& e) {
    switch (e.kind) {
      case TermExpr::Kind::kVar:
        return var(e.name);
      case TermExpr::Kind::kLiteral:
        return store_.make_int(e.literal);
      case TermExpr::Kind::kObj: {
        std::vector<ValueField> fields;
        for (const auto& [f, sub] : e.fields) fields.push_back({f, build(sub)});
        return store_.make_obj(e.name, std::move(fields));
      }
      default:
        throw std::invalid_argument("not a value expression");
    }
  }

  ValueStore& store_;
  const EquationSystem& sys_;
  std::map<std::string, std::string> target_;
  std::map<std::string, ValueId> slot_;
};

// Shared printing logic: decide which nodes get a name, then emit.
template <typename Store, typename Id>
struct NamingPlan {
  std::vector<Id> order;
  std::unordered_map<Id, std::string> names;
  std::vector<Id> named;  // in order of first appearance
};

template <typename Store, typename Id, typename IsLeaf>
NamingPlan<Store, Id> plan_names(const Store& store, Id root, char prefix,
                                 IsLeaf is_leaf) {
  NamingPlan<Store, Id> plan;
  plan.order = subterm_closure(store, root);
  std::unordered_map<Id, int> indegree;
  for (Id id : plan.order) {
    for (Id c : store.node(id).children()) ++indegree[c];
  }
  for (Id id : plan.order) {
    if (id == root || (indegree[id] >= 2 && !is_leaf(store.node(id)))) {
      plan.names.emplace(id, prefix + std::to_string(plan.named.size()));
      plan.named.push_back(id);
    }
  }
  return plan;
}

class TypePrinter {
 public:
  TypePrinter(const TypeStore& store, TypeId root)
      : store_(store),
        plan_(plan_names(store, root, 'T', [](const TypeNode& n) {
          return n.kind == TypeKind::kInt;
        })) {}

  std::string system() const {
    std::ostringstream out;
    for (TypeId id : plan_.named) {
      out << plan_.names.at(id) << " = " << body(id, false) << ";\n";
    }
    out << "root " << plan_.names.at(plan_.named.front());
    return out.str();
  }

  bool is_tree(TypeId root) const {
    if (plan_.named.size() != 1) return false;
    for (TypeId id : plan_.order) {
      for (TypeId c : store_.node(id).children()) {
        if (c == root) return false;
      }
    }
    return true;
  }

  std::string inline_root(TypeId root) const { return body(root, false); }

  std::string ref(TypeId id, bool in_union_left) const {
    if (auto it = plan_.names.find(id); it != plan_.names.end()) return it->second;
    return body(id, in_union_left);
  }

  std::string body(TypeId id, bool in_union_left) const {
    const TypeNode& n = store_.node(id);
    switch (n.kind) {
      case TypeKind::kInt:
        return "int";
      case TypeKind::kUnion: {
        std::string s = ref(n.left, true) + " \\/ " + ref(n.right, false);
        return in_union_left ? "(" + s + ")" : s;
      }
      case TypeKind::kObj: {
        std::string s = "obj(" + n.class_name + ",[";
        for (std::size_t i = 0; i < n.fields.size(); ++i) {
          if (i) s += ",";
          s += n.fields[i].name + ":" + ref(n.fields[i].type, false);
        }
        return s + "])";
      }
      case TypeKind::kPending:
        break;
    }
    throw std::logic_error("pending type node");
  }

 private:
  const TypeStore& store_;
  NamingPlan<TypeStore, TypeId> plan_;
};

class ValuePrinter {
 public:
  ValuePrinter(const ValueStore& store, ValueId root)
      : store_(store),
        plan_(plan_names(store, root, 'V', [](const ValueNode& n) {
          return n.kind == ValueKind::kInt;
        })) {}

  std::string system() const {
    std::ostringstream out;
    for (ValueId id : plan_.named) {
      out << plan_.names.at(id) << " = " << body(id) << ";\n";
    }
    out << "root " << plan_.names.at(plan_.named.front());
    return out.str();
  }

 private:
  std::string ref(ValueId id) const {
    if (auto it = plan_.names.find(id); it != plan_.names.end()) return it->second;
    return body(id);
  }

  std::string body(ValueId id) const {
    const ValueNode& n = store_.node(id);
    if (n.kind == ValueKind::kInt) return std::to_string(n.integer);
    if (n.kind == ValueKind::kPending) throw std::logic_error("pending value node");
    std::string s = "obj(" + n.class_name + ",[";
    for (std::size_t i = 0; i < n.fields.size(); ++i) {
      if (i) s += ",";
      s += n.fields[i].name + "->" + ref(n.fields[i].value);
    }
    return s + "])";
  }

  const ValueStore& store_;
  NamingPlan<ValueStore, ValueId> plan_;
};

void reject_json(const std::string& why) {
  throw std::invalid_argument("malformed term JSON: " + why);
}

}  // namespace

EquationSystem parse_type_system(std::string_view source) {
  return SystemParser(source, false).parse();
}

EquationSystem parse_value_system(std::string_view source) {
  return SystemParser(source, true).parse();
}

TypeId resolve_type(TypeStore& store, const EquationSystem& system) {
  if (system.is_value) throw std::invalid_argument("value system given as type");
  return TypeResolver(store, system).run();
}

ValueId resolve_value(ValueStore& store, const EquationSystem& system) {
  if (!system.is_value) throw std::invalid_argument("type system given as value");
  return ValueResolver(store, system).run();
}

TypeId read_type(TypeStore& store, std::string_view source) {
  return resolve_type(store, parse_type_system(source));
}

ValueId read_value(ValueStore& store, std::string_view source) {
  return resolve_value(store, parse_value_system(source));
}

std::string print_type(const TypeStore& store, TypeId root) {
  return TypePrinter(store, root).system();
}

std::string print_value(const ValueStore& store, ValueId root) {
  return ValuePrinter(store, root).system();
}

std::string show_type(const TypeStore& store, TypeId root) {
  TypePrinter p(store, root);
  if (p.is_tree(root)) return p.inline_root(root);
  std::string sys = p.system();
  for (auto& c : sys) {
    if (c == '\n') c = ' ';
  }
  return sys;
}

nlohmann::json type_to_json(const TypeStore& store, TypeId root) {
  std::vector<TypeId> order = subterm_closure(store, root);
  std::unordered_map<TypeId, std::string> name;
  for (std::size_t i = 0; i < order.size(); ++i) {
    name.emplace(order[i], "T" + std::to_string(i));
  }
  nlohmann::json bindings = nlohmann::json::object();
  for (TypeId id : order) {
    const TypeNode& n = store.node(id);
    nlohmann::json b;
    switch (n.kind) {
      case TypeKind::kInt:
        b["kind"] = "int";
        break;
      case TypeKind::kUnion:
        b["kind"] = "union";
        b["left"] = name.at(n.left);
        b["right"] = name.at(n.right);
        break;
      case TypeKind::kObj: {
        b["kind"] = "obj";
        b["class"] = n.class_name;
        nlohmann::json fields = nlohmann::json::object();
        for (const auto& f : n.fields) fields[f.name] = name.at(f.type);
        b["fields"] = fields;
        break;
      }
      case TypeKind::kPending:
        throw std::logic_error("pending type node");
    }
    bindings[name.at(id)] = b;
  }
  return {{"root", name.at(root)}, {"bindings", bindings}};
}

nlohmann::json value_to_json(const ValueStore& store, ValueId root) {
  std::vector<ValueId> order = subterm_closure(store, root);
  std::unordered_map<ValueId, std::string> name;
  for (std::size_t i = 0; i < order.size(); ++i) {
    name.emplace(order[i], "V" + std::to_string(i));
  }
  nlohmann::json bindings = nlohmann::json::object();
  for (ValueId id : order) {
    const ValueNode& n = store.node(id);
    nlohmann::json b;
    if (n.kind == ValueKind::kInt) {
      b["kind"] = "int";
      b["value"] = n.integer;
    } else {
      b["kind"] = "obj";
      b["class"] = n.class_name;
      nlohmann::json fields = nlohmann::json::object();
      for (const auto& f : n.fields) fields[f.name] = name.at(f.value);
      b["fields"] = fields;
    }
    bindings[name.at(id)] = b;
  }
  return {{"root", name.at(root)}, {"bindings", bindings}};
}

TypeId type_from_json(TypeStore& store, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("root") || !j.contains("bindings")) {
    reject_json("expected {root, bindings}");
  }
  const auto& bindings = j.at("bindings");
  std::map<std::string, TypeId> slot;
  for (const auto& [name, b] : bindings.items()) slot[name] = store.reserve();
  auto lookup = [&](const nlohmann::json& ref) {
    auto it = slot.find(ref.get<std::string>());
    if (it == slot.end()) reject_json("unbound name " + ref.dump());
    return it->second;
  };
  for (const auto& [name, b] : bindings.items()) {
    TypeNode n;
    std::string kind = b.at("kind").get<std::string>();
    if (kind == "int") {
      n.kind = TypeKind::kInt;
    } else if (kind == "union") {
      n.kind = TypeKind::kUnion;
      n.left = lookup(b.at("left"));
      n.right = lookup(b.at("right"));
    } else if (kind == "obj") {
      n.kind = TypeKind::kObj;
      n.class_name = b.at("class").get<std::string>();
      for (const auto& [f, ref] : b.at("fields").items()) {
        n.fields.push_back({f, lookup(ref)});
      }
    } else {
      reject_json("unknown kind '" + kind + "'");
    }
    store.define(slot.at(name), std::move(n));
  }
  return lookup(j.at("root"));
}

ValueId value_from_json(ValueStore& store, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("root") || !j.contains("bindings")) {
    reject_json("expected {root, bindings}");
  }
  const auto& bindings = j.at("bindings");
  std::map<std::string, ValueId> slot;
  for (const auto& [name, b] : bindings.items()) slot[name] = store.reserve();
  auto lookup = [&](const nlohmann::json& ref) {
    auto it = slot.find(ref.get<std::string>());
    if (it == slot.end()) reject_json("unbound name " + ref.dump());
    return it->second;
  };
  for (const auto& [name, b] : bindings.items()) {
    ValueNode n;
    std::string kind = b.at("kind").get<std::string>();
    if (kind == "int") {
      n.kind = ValueKind::kInt;
      n.integer = b.at("value").get<std::int64_t>();
    } else if (kind == "obj") {
      n.kind = ValueKind::kObj;
      n.class_name = b.at("class").get<std::string>();
      for (const auto& [f, ref] : b.at("fields").items()) {
        n.fields.push_back({f, lookup(ref)});
      }
    } else {
      reject_json("unknown kind '" + kind + "'");
    }
    store.define(slot.at(name), std::move(n));
  }
  return lookup(j.at("root"));
}

}  // namespace coinfer
