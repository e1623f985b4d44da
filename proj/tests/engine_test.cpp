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


#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "coinfer/engine.hpp"
#include "coinfer/horn_compiler.hpp"
#include "coinfer/logic_term.hpp"
#include "coinfer/program.hpp"
#include "coinfer/subtyping.hpp"
#include "coinfer/term_syntax.hpp"
#include "support.hpp"

namespace coinfer {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kEvnOdd =
    " where E = obj(zero,[]) \\/ obj(succ,[pred:obj(succ,[pred:E])])"
    " ; O = obj(succ,[pred:obj(zero,[])]) \\/ obj(succ,[pred:obj(succ,[pred:O])])";

class ZeroSucc : public ::testing::Test {
 protected:
  SolveResult solve(const std::string& q, SolverConfig cfg = {}) {
    return engine.solve(parse_query(q), cfg, types);
  }
  std::string binding(const Answer& a, const std::string& var) {
    for (const auto& [v, t] : a.bindings) {
      if (v == var) return t;
    }
    return "<unbound>";
  }

  Engine engine{compile_program(parse_program(read_file(COINFER_TEST_DATA "/zero_succ.java")))};
  TypeStore types;
  TypeId odd = read_type(types, testing::kOdd);
  TypeId evn = read_type(types, testing::kEvn);
};

TEST(Unify, CyclicBinding) {
  std::optional<Answer> a = unify_rational(Term::var("X"), Term::compound("f", {Term::var("X")}));
  ASSERT_TRUE(a);
  ASSERT_EQ(a->bindings.size(), 1u);
  EXPECT_EQ(a->bindings[0].second, "T0");
  ASSERT_EQ(a->equations.size(), 1u);
  EXPECT_EQ(a->equations[0].second, "f(T0)");
}

TEST(Unify, Examples) {
  auto a = unify_rational(parse_atom("p(obj(c,[f:int]))").args[0],
                          parse_atom("p(obj(c,[f:Y]))").args[0]);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->bindings, (std::vector<std::pair<std::string, std::string>>{{"Y", "int"}}));

  auto b = unify_rational(parse_atom("p(obj(c,R))").args[0],
                          parse_atom("p(obj(c,[pred:N|R2]))").args[0]);
  ASSERT_TRUE(b);
  std::map<std::string, std::string> m(b->bindings.begin(), b->bindings.end());
  EXPECT_EQ(m["R"], "[pred:N|R2]");

  EXPECT_FALSE(unify_rational(Term::atom("a"), Term::atom("b")));
  EXPECT_FALSE(unify_rational(parse_atom("p(f(X))").args[0], parse_atom("p(g(X))").args[0]));
}

TEST(Unify, TwoCyclesMeet) {
  // X = f(X) and Y = f(f(Y)) denote the same rational tree.
  Term x = Term::var("X");
  auto a = unify_rational(Term::compound("g", {x, Term::var("Y"), x}),
                          Term::compound("g", {Term::compound("f", {x}),
                                               Term::compound("f", {Term::compound("f", {Term::var("Y")})}),
                                               Term::var("Y")}));
  ASSERT_TRUE(a);
}

TEST_F(ZeroSucc, SubclassFact) {
  SolveResult r = solve("subclass(succ,object)");
  EXPECT_EQ(r.status, SolveStatus::kAnswers);
  EXPECT_EQ(r.answers.size(), 1u);
}

TEST_F(ZeroSucc, NewSucc) {
  SolveResult r = solve("new(succ,[N],X)");
  ASSERT_EQ(r.answers.size(), 1u);
  EXPECT_EQ(binding(r.answers[0], "X"), "obj(succ,[pred:N])");
  EXPECT_EQ(r.answers[0].instance, "new(succ,[N],obj(succ,[pred:N]))");
}

TEST_F(ZeroSucc, ZeroReturnsItsArgument) {
  SolveResult r = solve(std::string("invoke(obj(zero,[]),add,[O],R)") + kEvnOdd);
  ASSERT_FALSE(r.answers.empty());
  ASSERT_TRUE(r.answers[0].result_type);
  SubtypeSolver s(types);
  EXPECT_TRUE(s.equivalent(*r.answers[0].result_type, odd));
}

TEST_F(ZeroSucc, EvenPlusOddIsOdd) {
  SolveResult r = solve(std::string("invoke(E,add,[O],R)") + kEvnOdd);
  ASSERT_EQ(r.status, SolveStatus::kAnswers);
  EXPECT_LE(r.depth, SolverConfig{}.max_depth);
  SubtypeSolver s(types);
  ASSERT_TRUE(r.answers[0].result_type);
  EXPECT_TRUE(s.equivalent(*r.answers[0].result_type, odd));
  for (const auto& a : r.answers) {
    ASSERT_TRUE(a.result_type);
    EXPECT_TRUE(check_answer(a, types, odd));
    EXPECT_FALSE(check_answer(a, types, evn));
  }
}

TEST_F(ZeroSucc, EvenPlusOddWithoutSubsumptionExhaustsDepth) {
  SolverConfig cfg;
  cfg.subsumption_enabled = false;
  SolveResult r = solve(std::string("invoke(E,add,[O],R)") + kEvnOdd, cfg);
  EXPECT_EQ(r.status, SolveStatus::kDepthExhausted);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_EQ(r.depth, cfg.max_depth);
}

TEST_F(ZeroSucc, ObligationsHold) {
  SolveResult r = solve(std::string("invoke(E,add,[O],R)") + kEvnOdd);
  EXPECT_FALSE(r.obligations.empty());
  SubtypeSolver fresh(types);
  for (const auto& o : r.obligations) EXPECT_TRUE(fresh.subtype(o.left, o.right));
}

TEST_F(ZeroSucc, AnswersAreStable) {
  SolveResult r = solve(std::string("invoke(E,add,[O],R)") + kEvnOdd);
  ASSERT_FALSE(r.answers.empty());
  for (const auto& a : r.answers) {
    SolveResult again = solve(a.instance);
    EXPECT_EQ(again.status, SolveStatus::kAnswers) << a.instance;
    EXPECT_LE(again.depth, r.depth);
  }
}

TEST_F(ZeroSucc, NoMethodNoAnswer) {
  SolveResult r = solve("invoke(obj(zero,[]),sub,[int],R)");
  EXPECT_EQ(r.status, SolveStatus::kNoAnswers);
}

TEST_F(ZeroSucc, JsonAnswer) {
  SolveResult r = solve("new(succ,[int],X)");
  ASSERT_EQ(r.answers.size(), 1u);
  nlohmann::json j = r.answers[0].to_json();
  EXPECT_EQ(j["bindings"]["X"], "obj(succ,[pred:int])");
}

TEST(CheckAnswer, Examples) {
  TypeStore types;
  TypeId odd = read_type(types, testing::kOdd);
  TypeId evn = read_type(types, testing::kEvn);
  Answer tau;
  // tau = odd \/ tau
  TypeId t = types.reserve();
  types.define(t, testing::union_node(odd, t));
  tau.result_type = t;
  EXPECT_TRUE(check_answer(tau, types, odd));
  Answer plain;
  plain.result_type = odd;
  EXPECT_TRUE(check_answer(plain, types, odd));
  Answer even;
  even.result_type = evn;
  EXPECT_FALSE(check_answer(even, types, odd));
  EXPECT_THROW(check_answer(Answer{}, types, odd), std::invalid_argument);
}

TEST(Engine, RecordWidthThroughSubsumption) {
  Engine e(compile_program(parse_program("class C { f; g; }")));
  TypeStore types;
  SolveResult r = e.solve(parse_query("field_acc(obj(c,[f:int,g:obj(d,[])]),g,T)"), {}, types);
  ASSERT_FALSE(r.answers.empty());
  EXPECT_EQ(r.answers[0].bindings[0].second, "obj(d,[])");
}

TEST(Engine, FieldOfUnion) {
  Engine e(compile_program(parse_program("class C { f; } class D { f; }")));
  TypeStore types;
  SolveResult r = e.solve(parse_query("field_acc(obj(c,[f:int]) \\/ obj(d,[f:obj(c,[])]),f,T)"),
                          {}, types);
  ASSERT_FALSE(r.answers.empty());
  EXPECT_EQ(r.answers[0].bindings[0].second, "int \\/ obj(c,[])");
}

TEST(Engine, InheritedMethod) {
  Engine e(compile_program(parse_program(
      "class A { m(x) { return x; } } class B extends A { } class C extends B { }")));
  TypeStore types;
  SolveResult r = e.solve(parse_query("invoke(obj(c,[]),m,[int],R)"), {}, types);
  ASSERT_FALSE(r.answers.empty());
  EXPECT_EQ(r.answers[0].bindings[0].second, "int");
}

TEST(Engine, CoinductiveHypothesis) {
  Engine e(parse_clauses("p(X) :- p(X).\nstream([H|T]) :- bit(H), stream(T).\nbit(0).\nbit(1)."));
  TypeStore types;
  SolveResult r = e.solve(parse_query("p(a)"), {}, types);
  EXPECT_EQ(r.status, SolveStatus::kAnswers);

  SolveResult s = e.solve(parse_query("stream(S)"), {}, types);
  ASSERT_FALSE(s.answers.empty());
  EXPECT_EQ(s.answers[0].bindings[0].second, "T0");
  EXPECT_EQ(s.answers[0].equations[0].second, "[0|T0]");

  SolverConfig off;
  off.coinduction_enabled = false;
  off.max_depth = 32;
  EXPECT_EQ(e.solve(parse_query("p(a)"), off, types).status, SolveStatus::kDepthExhausted);
}

TEST(Engine, WhereEquationsMayBeCyclic) {
  Engine e(parse_clauses("q(X,X)."));
  TypeStore types;
  SolveResult r = e.solve(parse_query("q(A,B) where A = f(A) ; B = f(f(B))"), {}, types);
  EXPECT_EQ(r.status, SolveStatus::kAnswers);
}

// Differential test against naive bottom-up evaluation of random
// non-recursive Datalog programs.

struct Datalog {
  std::vector<HornClause> clauses;
  std::vector<std::pair<std::string, int>> preds;
};

Datalog random_datalog(testing::Rng& rng) {
  const std::vector<std::string> consts{"a", "b", "c"};
  const std::vector<std::string> vars{"X", "Y", "Z"};
  Datalog d;
  std::vector<std::vector<std::pair<std::string, int>>> layers{
      {{"e", 2}, {"f", 1}}, {{"p", 1}, {"q", 2}}, {{"r", 1}, {"s", 2}}};
  for (const auto& [name, arity] : layers[0]) {
    for (const auto& x : consts) {
      for (const auto& y : consts) {
        if (testing::pick(rng, 3) != 0) continue;
        std::vector<Term> args{Term::atom(x)};
        if (arity == 2) args.push_back(Term::atom(y));
        HornClause c{{name, args}, {}};
        if (std::find(d.clauses.begin(), d.clauses.end(), c) == d.clauses.end()) {
          d.clauses.push_back(c);
        }
      }
    }
  }
  for (std::size_t l = 1; l < layers.size(); ++l) {
    std::vector<std::pair<std::string, int>> below;
    for (std::size_t k = 0; k < l; ++k) below.insert(below.end(), layers[k].begin(), layers[k].end());
    for (const auto& [name, arity] : layers[l]) {
      for (int rule = 0; rule < 2; ++rule) {
        HornClause c;
        std::set<std::string> bound;
        std::size_t atoms = 1 + testing::pick(rng, 2);
        for (std::size_t i = 0; i < atoms; ++i) {
          const auto& [bp, ba] = below[testing::pick(rng, below.size())];
          Atom a{bp, {}};
          for (int k = 0; k < ba; ++k) {
            if (testing::pick(rng, 4) == 0) {
              a.args.push_back(Term::atom(consts[testing::pick(rng, 3)]));
            } else {
              std::string v = vars[testing::pick(rng, 3)];
              bound.insert(v);
              a.args.push_back(Term::var(v));
            }
          }
          c.body.push_back(a);
        }
        c.head.predicate = name;
        std::vector<std::string> bv(bound.begin(), bound.end());
        for (int k = 0; k < arity; ++k) {
          if (bv.empty() || testing::pick(rng, 4) == 0) {
            c.head.args.push_back(Term::atom(consts[testing::pick(rng, 3)]));
          } else {
            c.head.args.push_back(Term::var(bv[testing::pick(rng, bv.size())]));
          }
        }
        d.clauses.push_back(c);
      }
      d.preds.push_back({name, arity});
    }
  }
  d.preds.insert(d.preds.begin(), layers[0].begin(), layers[0].end());
  return d;
}

std::set<std::string> bottom_up(const Datalog& d) {
  const std::vector<std::string> consts{"a", "b", "c"};
  std::set<std::string> model;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : d.clauses) {
      // Enumerate X, Y, Z over the constants.
      for (int code = 0; code < 27; ++code) {
        std::map<std::string, std::string> env{
            {"X", consts[code % 3]}, {"Y", consts[(code / 3) % 3]}, {"Z", consts[code / 9]}};
        auto ground = [&](const Atom& a) {
          Atom g{a.predicate, {}};
          for (const auto& t : a.args) {
            g.args.push_back(t.kind == Term::Kind::kVar ? Term::atom(env.at(t.name)) : t);
          }
          return to_string(g);
        };
        bool holds = true;
        for (const auto& b : c.body) holds = holds && model.contains(ground(b));
        if (holds && model.insert(ground(c.head)).second) changed = true;
      }
    }
  }
  return model;
}

TEST(Engine, AgreesWithBottomUpEvaluation) {
  testing::Rng rng(77);
  const std::vector<std::string> consts{"a", "b", "c"};
  int positives = 0;
  for (int round = 0; round < 60; ++round) {
    Datalog d = random_datalog(rng);
    std::set<std::string> model = bottom_up(d);
    Engine e(d.clauses);
    TypeStore types;
    for (bool coinduction : {false, true}) {
      SolverConfig cfg;
      cfg.subsumption_enabled = false;
      cfg.coinduction_enabled = coinduction;
      cfg.max_answers = 100;
      for (const auto& [name, arity] : d.preds) {
        std::set<std::string> expected;
        for (const auto& x : consts) {
          for (const auto& y : consts) {
            Atom g{name, {Term::atom(x)}};
            if (arity == 2) g.args.push_back(Term::atom(y));
            std::string text = to_string(g);
            if (arity == 1 && y != "a") continue;
            bool in_model = model.contains(text);
            if (in_model) expected.insert(text);
            SolveResult r = e.solve(Query{g, {}}, cfg, types);
            ASSERT_NE(r.status, SolveStatus::kDepthExhausted);
            ASSERT_EQ(!r.answers.empty(), in_model) << text << "\n" << to_string(d.clauses);
            positives += in_model;
          }
        }
        // The open query enumerates the same atoms.
        Atom open{name, {Term::var("A")}};
        if (arity == 2) open.args.push_back(Term::var("B"));
        SolveResult r = e.solve(Query{open, {}}, cfg, types);
        std::set<std::string> got;
        for (const auto& a : r.answers) got.insert(a.instance);
        EXPECT_EQ(got, expected) << to_string(d.clauses);
      }
    }
  }
  EXPECT_GT(positives, 100);
}

}  // namespace
}  // namespace coinfer
