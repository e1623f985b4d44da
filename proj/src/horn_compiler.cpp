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

#include "coinfer/horn_compiler.hpp"

#include <cctype>
#include <set>

namespace coinfer {
namespace {

Term V(std::string n) { return Term::var(std::move(n)); }
Term A(std::string n) { return Term::atom(std::move(n)); }
Atom at(std::string p, std::vector<Term> args) { return Atom{std::move(p), std::move(args)}; }
HornClause fact(Atom head) { return HornClause{std::move(head), {}}; }
HornClause rule(Atom head, std::vector<Atom> body) {
  return HornClause{std::move(head), std::move(body)};
}
Term obj(Term cls, Term record) {
  return Term::compound("obj", {std::move(cls), std::move(record)});
}

std::string param_variable(const std::string& p) {
  std::string out = p;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// Compiles one method body into body atoms; intermediate results get fresh
// variables V0, V1, ... that avoid the clause's parameter variables.
class MethodCompiler {
 public:
  explicit MethodCompiler(const Method& m) {
    used_.insert("This");
    for (const auto& p : m.params) {
      std::string v = param_variable(p);
      while (used_.contains(v)) v += "_";
      used_.insert(v);
      params_.emplace_back(p, v);
    }
  }

  std::vector<Term> param_terms() const {
    std::vector<Term> out{V("This")};
    for (const auto& [p, v] : params_) out.push_back(V(v));
    return out;
  }

  Term compile(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kParam:
        for (const auto& [p, v] : params_) {
          if (p == e.name) return V(v);
        }
        break;
      case Expr::Kind::kThis:
        return V("This");
      case Expr::Kind::kInt:
        return A("int");
      case Expr::Kind::kField: {
        Term r = fresh();
        body_.push_back(at("field_acc", {V("This"), A(e.name), r}));
        return r;
      }
      case Expr::Kind::kFieldAccess: {
        Term target = compile(*e.receiver);
        Term r = fresh();
        body_.push_back(at("field_acc", {target, A(e.name), r}));
        return r;
      }
      case Expr::Kind::kNew: {
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(compile(a));
        Term r = fresh();
        body_.push_back(at("new", {A(class_constant(e.name)), Term::list(args), r}));
        return r;
      }
      case Expr::Kind::kInvoke: {
        Term target = compile(*e.receiver);
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(compile(a));
        Term r = fresh();
        body_.push_back(at("invoke", {target, A(e.name), Term::list(args), r}));
        return r;
      }
    }
    return V("This");
  }

  std::vector<Atom> take_body() { return std::move(body_); }

 private:
  Term fresh() {
    std::string v;
    do {
      v = "V" + std::to_string(next_++);
    } while (used_.contains(v));
    used_.insert(v);
    return V(v);
  }

  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<Atom> body_;
  int next_ = 0;
};

}  // namespace

std::vector<HornClause> runtime_clauses() {
  std::vector<HornClause> out;
  out.push_back(rule(at("subclass", {V("X"), V("X")}), {at("class", {V("X")})}));
  out.push_back(rule(at("subclass", {V("X"), A("object")}), {at("class", {V("X")})}));
  out.push_back(rule(at("subclass", {V("X"), V("Y")}),
                     {at("extends", {V("X"), V("Z")}), at("subclass", {V("Z"), V("Y")})}));
  out.push_back(rule(at("field_acc", {obj(V("C"), V("R")), V("F"), V("T")}),
                     {at("has_field", {V("C"), V("F")}),
                      at("rec_acc", {V("R"), V("F"), V("T")})}));
  out.push_back(rule(at("field_acc", {Term::union_of(V("T1"), V("T2")), V("F"),
                                      Term::union_of(V("FT1"), V("FT2"))}),
                     {at("field_acc", {V("T1"), V("F"), V("FT1")}),
                      at("field_acc", {V("T2"), V("F"), V("FT2")})}));
  out.push_back(fact(at("rec_acc", {Term::list({Term::compound(":", {V("F"), V("T")})}),
                                    V("F"), V("T")})));
  out.push_back(rule(at("invoke", {obj(V("C"), V("R")), V("M"), V("A"), V("RT")}),
                     {at("has_meth", {V("C"), V("M"), Term::cons(obj(V("C"), V("R")), V("A")),
                                      V("RT")})}));
  out.push_back(rule(at("invoke", {Term::union_of(V("T1"), V("T2")), V("M"), V("A"),
                                   Term::union_of(V("RT1"), V("RT2"))}),
                     {at("invoke", {V("T1"), V("M"), V("A"), V("RT1")}),
                      at("invoke", {V("T2"), V("M"), V("A"), V("RT2")})}));
  return out;
}

std::vector<HornClause> compile_program(const Program& program) {
  std::vector<HornClause> out;
  std::vector<std::string> classes{"object"};
  for (const auto& c : program.classes) classes.push_back(class_constant(c.name));

  for (const auto& c : classes) out.push_back(fact(at("class", {A(c)})));
  for (const auto& c : program.classes) {
    out.push_back(fact(at("extends", {A(class_constant(c.name)),
                                      A(class_constant(c.superclass))})));
  }
  for (auto& c : runtime_clauses()) out.push_back(std::move(c));

  out.push_back(fact(at("new", {A("object"), Term::nil(), obj(A("object"), Term::nil())})));
  for (const auto& c : program.classes) {
    std::string k = class_constant(c.name);
    std::vector<Term> params;
    std::vector<Term> entries;
    for (const auto& p : c.constructor.params) params.push_back(V(param_variable(p)));
    for (const auto& [f, p] : c.constructor.assignments) {
      entries.push_back(Term::compound(":", {A(f), V(param_variable(p))}));
    }
    // P and R must not clash with constructor parameters.
    std::string pv = "P";
    std::string rv = "R";
    for (const auto& p : c.constructor.params) {
      if (param_variable(p) == pv) pv += "_";
      if (param_variable(p) == rv) rv += "_";
    }
    out.push_back(rule(at("new", {A(k), Term::list(params), obj(A(k), Term::list(entries, V(rv)))}),
                       {at("extends", {A(k), V(pv)}),
                        at("new", {V(pv), Term::nil(), obj(V(pv), V(rv))})}));
  }

  std::vector<std::string> field_names;
  std::vector<std::string> method_names;
  std::set<std::string> seen_f;
  std::set<std::string> seen_m;
  for (const auto& c : program.classes) {
    for (const auto& f : c.fields) {
      if (seen_f.insert(f).second) field_names.push_back(f);
    }
    for (const auto& m : c.methods) {
      if (seen_m.insert(m.name).second) method_names.push_back(m.name);
    }
  }
  auto declares_field = [&](const std::string& k, const std::string& f) {
    for (const auto& c : program.classes) {
      if (class_constant(c.name) != k) continue;
      for (const auto& g : c.fields) {
        if (g == f) return true;
      }
    }
    return false;
  };
  auto declares_method = [&](const std::string& k, const std::string& m) {
    for (const auto& c : program.classes) {
      if (class_constant(c.name) != k) continue;
      for (const auto& g : c.methods) {
        if (g.name == m) return true;
      }
    }
    return false;
  };

  for (const auto& c : program.classes) {
    for (const auto& f : c.fields) {
      out.push_back(fact(at("dec_field", {A(class_constant(c.name)), A(f)})));
    }
  }
  for (const auto& k : classes) {
    for (const auto& f : field_names) {
      if (!declares_field(k, f)) out.push_back(fact(at("not_dec_field", {A(k), A(f)})));
    }
  }
  // Without any declared field has_field can never hold, so its clauses
  // are left out altogether; likewise has_meth below.
  if (!field_names.empty()) {
    out.push_back(rule(at("has_field", {V("C"), V("F")}), {at("dec_field", {V("C"), V("F")})}));
    out.push_back(rule(at("has_field", {V("C"), V("F")}),
                       {at("extends", {V("C"), V("P")}), at("has_field", {V("P"), V("F")}),
                        at("not_dec_field", {V("C"), V("F")})}));
  }

  for (const auto& c : program.classes) {
    for (const auto& m : c.methods) {
      out.push_back(fact(at("dec_meth", {A(class_constant(c.name)), A(m.name)})));
    }
  }
  for (const auto& k : classes) {
    for (const auto& m : method_names) {
      if (!declares_method(k, m)) out.push_back(fact(at("not_dec_meth", {A(k), A(m)})));
    }
  }
  for (const auto& c : program.classes) {
    for (const auto& m : c.methods) {
      MethodCompiler mc(m);
      Term result = mc.compile(m.body);
      out.push_back(rule(at("has_meth", {A(class_constant(c.name)), A(m.name),
                                         Term::list(mc.param_terms()), result}),
                         mc.take_body()));
    }
  }
  if (!method_names.empty()) {
    out.push_back(rule(at("has_meth", {V("C"), V("M"), V("A"), V("R")}),
                       {at("extends", {V("C"), V("P")}),
                        at("has_meth", {V("P"), V("M"), V("A"), V("R")}),
                        at("not_dec_meth", {V("C"), V("M")})}));
  }
  return out;
}

std::string clauses_to_prolog(const std::vector<HornClause>& clauses) {
  return to_string(clauses);
}

nlohmann::json clauses_to_json(const std::vector<HornClause>& clauses) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : clauses) out.push_back(to_json(c));
  return out;
}

}  // namespace coinfer
