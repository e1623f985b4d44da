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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "coinfer/canonical.hpp"
#include "coinfer/emptiness.hpp"
#include "coinfer/engine.hpp"
#include "coinfer/horn_compiler.hpp"
#include "coinfer/interpretation.hpp"
#include "coinfer/logic_term.hpp"
#include "coinfer/program.hpp"
#include "coinfer/subtyping.hpp"
#include "coinfer/term_syntax.hpp"
#include "support.hpp"

namespace coinfer {
namespace {

using Clock = std::chrono::steady_clock;

// Collects the first failure of a criterion.
struct Check {
  std::string failure;
  void require(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return std::string(COINFER_TEST_DATA "/") + name; }

std::vector<std::string> normalized(const std::vector<HornClause>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(to_string(normalize_variables(c)));
  std::sort(out.begin(), out.end());
  return out;
}

void golden_compile(Check& c) {
  auto got = compile_program(parse_program(read_file(data("zero_succ.java"))));
  auto want = parse_clauses(read_file(data("zero_succ.golden.pl")));
  c.require(normalized(got) == normalized(want), "zero_succ clauses differ from the golden file");
  auto none = compile_program(parse_program(""));
  c.require(normalized(none) == normalized(parse_clauses(read_file(data("empty.golden.pl")))),
            "empty program clauses differ from the golden file");
}

void judgments(Check& c) {
  TypeStore s;
  SubtypeSolver sub(s);
  EmptinessChecker empty(s);
  TypeId bot = read_type(s, testing::kBot);
  TypeId integer = s.make_int();
  c.require(!sub.subtype(integer, bot), "int <= bot");
  testing::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    TypeId t = testing::random_type(s, rng);
    c.require(sub.subtype(bot, t), "bot not below " + print_type(s, t));
  }
  TypeId flat = read_type(s, "T = obj(c,[f1:B, f2:int]); B = B \\/ B; root T");
  c.require(sub.equivalent(bot, flat), "bot not equivalent to obj(c,[f1:bot,f2:int])");
  TypeId nested = read_type(s, "T = obj(c1,[f:obj(c2,[g:B])]); B = B \\/ B; root T");
  c.require(sub.subtype(nested, bot), "nested empty object not below bot");

  TypeId t1 = s.make_obj("d", {});
  TypeId lhs = s.make_obj("c", {{"f", s.make_union(t1, integer)}});
  TypeId rhs = s.make_union(s.make_obj("c", {{"f", t1}}), s.make_obj("c", {{"f", integer}}));
  c.require(sub.subtype(lhs, rhs), "distributivity, left to right");
  c.require(sub.subtype(rhs, lhs), "distributivity, right to left");

  TypeId odd = read_type(s, testing::kOdd);
  auto succ = [&](TypeId t) { return s.make_obj("succ", {{"pred", t}}); };
  c.require(sub.subtype(succ(succ(odd)), odd), "succ(succ(odd)) <= odd");

  ValueStore values;
  TypeId nat = read_type(s, testing::kNat);
  c.require(member(values, s, read_value(values, read_file(data("vinf.val"))), nat),
            "infinite successor chain not a member of nat");

  c.require(empty.not_empty(integer), "int empty");
  c.require(!empty.not_empty(bot), "bot non-empty");
  c.require(!empty.not_empty(nested), "nested empty object non-empty");
}

void soundness(Check& c) {
  TypeStore s;
  ValueStore values;
  SubtypeSolver sub(s);
  EmptinessChecker empty(s);
  testing::Rng rng(11);
  int positive = 0;
  for (int i = 0; i < 10000 && c.failure.empty(); ++i) {
    TypeId a = testing::random_type(s, rng);
    // Half the right-hand sides contain the left, so positives are common.
    TypeId b = i % 2 == 0 ? testing::random_type(s, rng)
                          : s.make_union(testing::random_type(s, rng), a);
    if (!sub.subtype(a, b) || !empty.not_empty(a)) continue;
    ++positive;
    for (ValueId v : sample_values(s, values, a, 20, i)) {
      c.require(member(values, s, v, b), "sample " + print_value(values, v) + " of " +
                                             print_type(s, a) + " not in " + print_type(s, b));
    }
  }
  c.require(positive >= 3000, "only " + std::to_string(positive) + " positive pairs");
}

void emptiness_oracle(Check& c) {
  TypeStore s;
  ValueStore values;
  testing::Rng rng(13);
  testing::TypeGen gen;
  gen.max_nodes = 12;
  // Cyclic objects are inhabited, so most random types are non-empty; a
  // generator without int leaves and with more unions evens this out a bit.
  testing::TypeGen sparse = gen;
  sparse.p_int = 0.0;
  sparse.p_obj = 0.3;
  sparse.fields = {"f", "g", "h", "k"};
  int nonempty = 0;
  for (int i = 0; i < 5000 && c.failure.empty(); ++i) {
    TypeId t = testing::random_type(s, rng, i % 2 == 0 ? gen : sparse);
    EmptinessChecker fresh(s);
    bool oracle = testing::brute_force_witness(s, values, t).has_value();
    c.require(fresh.not_empty(t) == oracle, "disagreement on " + print_type(s, t));
    nonempty += oracle;
  }
  c.require(nonempty >= 500 && nonempty <= 4500,
            std::to_string(nonempty) + " of 5000 non-empty, too lopsided to be a test");
}

TypeId chain(TypeStore& s, std::size_t n) {
  TypeId head = s.reserve();
  TypeId cur = head;
  for (std::size_t i = 1; i < n; ++i) {
    TypeId next = s.reserve();
    s.define(cur, testing::obj_node("c", {{"f", next}}));
    cur = next;
  }
  s.define(cur, testing::obj_node("c", {{"f", head}}));
  return head;
}

// U_i = U_{i+1} \/ U_{i+1}, the last back to U_0: empty, and every result
// depends on the root.
TypeId union_loop(TypeStore& s, std::size_t n) {
  std::vector<TypeId> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(s.reserve());
  for (std::size_t i = 0; i < n; ++i) {
    TypeId next = u[(i + 1) % n];
    s.define(u[i], testing::union_node(next, next));
  }
  return u[0];
}

void linear_visits(Check& c) {
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    for (bool unions : {false, true}) {
      TypeStore s;
      TypeId t = unions ? union_loop(s, n) : chain(s, n);
      std::size_t edges = testing::edge_count(s, t);
      EmptinessChecker checker(s);
      auto start = Clock::now();
      bool ne = checker.not_empty(t);
      double secs = std::chrono::duration<double>(Clock::now() - start).count();
      std::string name = std::string(unions ? "union" : "chain") + " n=" + std::to_string(n);
      c.require(ne == !unions, name + ": wrong verdict");
      c.require(checker.last_visits() <= 4 * edges,
                name + ": " + std::to_string(checker.last_visits()) + " visits for " +
                    std::to_string(edges) + " edges");
      if (n == 100000) c.require(secs < 1.0, name + ": " + std::to_string(secs) + " s");
    }
  }
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(COINFER_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void subsumption(Check& c) {
  const std::string goal =
      "invoke(E,add,[O],R) where E = obj(zero,[]) \\/ obj(succ,[pred:obj(succ,[pred:E])]) ; "
      "O = obj(succ,[pred:obj(zero,[])]) \\/ obj(succ,[pred:obj(succ,[pred:O])])";
  Engine engine(compile_program(parse_program(read_file(data("zero_succ.java")))));
  TypeStore types;
  TypeId odd = read_type(types, testing::kOdd);
  SolveResult r = engine.solve(parse_query(goal), SolverConfig{}, types);
  c.require(r.status == SolveStatus::kAnswers, "no answer with subsumption");
  if (!r.answers.empty()) {
    SubtypeSolver sub(types);
    const auto& res = r.answers[0].result_type;
    c.require(res && sub.equivalent(*res, odd), "first answer is not equivalent to odd");
  }
  SolverConfig off;
  off.subsumption_enabled = false;
  SolveResult plain = engine.solve(parse_query(goal), off, types);
  c.require(plain.status == SolveStatus::kDepthExhausted && plain.answers.empty(),
            "without subsumption the search did not exhaust its depth");
  std::string q = "'" + goal + "'";
  c.require(run_cli("solve " + data("zero_succ.java") + " --query " + q) == 0,
            "cli solve did not exit 0");
  c.require(run_cli("solve --no-subsumption " + data("zero_succ.java") + " --query " + q) == 3,
            "cli solve --no-subsumption did not exit 3");
}

void lattice_laws(Check& c) {
  TypeStore s;
  SubtypeSolver sub(s);
  testing::Rng rng(17);
  for (int i = 0; i < 10000 && c.failure.empty(); ++i) {
    TypeId a = testing::random_type(s, rng);
    TypeId b = testing::random_type(s, rng);
    TypeId d = testing::random_type(s, rng);
    TypeId ab = s.make_union(a, b);
    std::string pair = print_type(s, a) + " / " + print_type(s, b);
    c.require(sub.subtype(a, a), "reflexivity: " + print_type(s, a));
    c.require(sub.subtype(a, ab) && sub.subtype(b, ab), "join upper bound: " + pair);
    c.require(sub.subtype(ab, d) == (sub.subtype(a, d) && sub.subtype(b, d)),
              "union on the left: " + pair + " / " + print_type(s, d));
  }
}

void representation(Check& c) {
  TypeStore s;
  ValueStore values;
  SubtypeSolver sub(s);
  EmptinessChecker empty(s);
  testing::Rng rng(19);
  for (int i = 0; i < 1000 && c.failure.empty(); ++i) {
    TypeId a = testing::random_type(s, rng);
    TypeId b = i % 2 == 0 ? testing::random_type(s, rng)
                          : s.make_union(testing::random_type(s, rng), a);
    std::string pair = print_type(s, a) + " / " + print_type(s, b);
    bool v = sub.subtype(a, b);
    bool ne = empty.not_empty(a);
    TypeId a2 = testing::inflate(s, a, rng);
    TypeId b2 = testing::inflate(s, b, rng);
    SubtypeSolver fresh(s);
    EmptinessChecker fresh_empty(s);
    c.require(fresh.subtype(a2, b2) == v, "subtype after inflate: " + pair);
    c.require(fresh.subtype(canonicalize(s, a2), canonicalize(s, b2)) == v,
              "subtype after canonicalize: " + pair);
    c.require(fresh_empty.not_empty(a2) == ne, "not_empty after inflate: " + pair);
    c.require(EmptinessChecker(s).not_empty(canonicalize(s, a2)) == ne,
              "not_empty after canonicalize: " + pair);
    if (!ne) continue;
    ValueId x = sample_values(s, values, a, 1, i).front();
    bool m = member(values, s, x, b);
    ValueId x2 = testing::inflate(values, x, rng);
    c.require(member(values, s, x2, b2) == m, "member after inflate: " + pair);
    c.require(member(values, s, canonicalize(values, x2), canonicalize(s, b2)) == m,
              "member after canonicalize: " + pair);
  }
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace
}  // namespace coinfer

int main() {
  using namespace coinfer;
  const Criterion criteria[] = {
      {"golden compile", 1, golden_compile},
      {"reference judgments", 5, judgments},
      {"subtyping sound for sampled members", 60, soundness},
      {"emptiness agrees with brute force", 60, emptiness_oracle},
      {"emptiness visits linear in edges", 30, linear_visits},
      {"subsumption makes even+odd terminate", 10, subsumption},
      {"reflexivity and join laws", 30, lattice_laws},
      {"representation independence", 30, representation},
  };
  int failed = 0;
  int index = 0;
  for (const auto& cr : criteria) {
    ++index;
    Check c;
    auto start = Clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > cr.limit_seconds) {
      c.require(false, "took " + std::to_string(secs) + " s, limit " +
                           std::to_string(cr.limit_seconds) + " s");
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (c.failure.empty() ? "PASS" : "FAIL") << " " << index << " " << cr.name << " ("
              << timing << ")";
    if (!c.failure.empty()) std::cout << ": " << c.failure;
    std::cout << "\n";
    failed += !c.failure.empty();
  }
  return failed == 0 ? 0 : 1;
}
