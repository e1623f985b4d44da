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

#include "coinfer/canonical.hpp"
#include "coinfer/emptiness.hpp"
#include "coinfer/interpretation.hpp"
#include "coinfer/term_syntax.hpp"
#include "support.hpp"

namespace coinfer {
namespace {

TEST(PathStack, ContractiveIffObjAtOrAbove) {
  PathStack p;
  p.push(TypeId{1}, false);
  p.push(TypeId{2}, true);
  p.push(TypeId{3}, false);
  EXPECT_TRUE(p.is_contractive(0));
  EXPECT_TRUE(p.is_contractive(1));
  EXPECT_FALSE(p.is_contractive(2));
  p.pop();
  p.pop();
  EXPECT_FALSE(p.is_contractive(0));
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.at(0), TypeId{1});
}

class EmptyTest : public ::testing::Test {
 protected:
  TypeStore types;
  ValueStore values;
  EmptinessChecker checker{types};
};

TEST_F(EmptyTest, Examples) {
  EXPECT_TRUE(checker.not_empty(types.make_int()));
  EXPECT_FALSE(checker.not_empty(read_type(types, testing::kBot)));
  EXPECT_FALSE(checker.not_empty(
      read_type(types, "T = obj(c1,[f:obj(c2,[g:B])]); B = B \\/ B; root T")));
  EXPECT_TRUE(checker.not_empty(read_type(types, testing::kNat)));
  EXPECT_TRUE(checker.not_empty(read_type(types, "T = obj(succ,[pred:T]); root T")));
  EXPECT_TRUE(checker.is_empty(read_type(types, "T = obj(c,[f:U]); U = U \\/ T \\/ B; B = B \\/ B; root U")) ==
              false);
}

TEST_F(EmptyTest, Witnesses) {
  std::optional<ValueId> w = checker.witness(types.make_int(), values);
  ASSERT_TRUE(w);
  EXPECT_EQ(values.node(*w).kind, ValueKind::kInt);
  EXPECT_EQ(values.node(*w).integer, 0);

  EXPECT_FALSE(checker.witness(read_type(types, testing::kBot), values));

  TypeId t = read_type(types, "T = obj(succ,[pred:T]); root T");
  std::optional<ValueId> c = checker.witness(t, values);
  ASSERT_TRUE(c);
  EXPECT_TRUE(equal(values, *c, read_value(values, "V = obj(succ,[pred->V]); root V")));
  EXPECT_TRUE(member(values, types, *c, t));
}

TEST_F(EmptyTest, NonemptySet) {
  TypeId t = read_type(types, "T = obj(c,[f:B]) \\/ int; B = B \\/ B; root T");
  auto ne = checker.nonempty_set(t);
  EXPECT_TRUE(ne.contains(t));
  EXPECT_EQ(ne.size(), 2u);  // T and int
}

TEST_F(EmptyTest, AgreesWithBruteForceSearch) {
  testing::Rng rng(31);
  testing::TypeGen gen;
  gen.max_nodes = 12;
  int nonempty = 0;
  for (int i = 0; i < 1500; ++i) {
    TypeId t = testing::random_type(types, rng, gen);
    bool oracle = testing::brute_force_witness(types, values, t).has_value();
    EmptinessChecker fresh(types);
    ASSERT_EQ(fresh.not_empty(t), oracle) << print_type(types, t);
    nonempty += oracle;
  }
  EXPECT_GT(nonempty, 300);
  EXPECT_LT(nonempty, 1400);
}

TEST_F(EmptyTest, WitnessIsAMember) {
  testing::Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    TypeId t = testing::random_type(types, rng);
    std::optional<ValueId> w = checker.witness(t, values);
    ASSERT_EQ(w.has_value(), checker.not_empty(t));
    if (w) {
      ASSERT_TRUE(member(values, types, *w, t)) << print_type(types, t);
    }
  }
}

TEST_F(EmptyTest, ComponentSolverAgrees) {
  testing::Rng rng(33);
  for (int i = 0; i < 2000; ++i) {
    TypeId t = testing::random_type(types, rng);
    EmptinessChecker a(types);
    EmptinessChecker b(types);
    ASSERT_EQ(a.not_empty(t), b.not_empty_by_components(t)) << print_type(types, t);
  }
}

TEST_F(EmptyTest, CachedCheckerAgreesWithFreshOne) {
  testing::Rng rng(34);
  std::vector<TypeId> ts;
  for (int i = 0; i < 300; ++i) ts.push_back(testing::random_type(types, rng));
  // Share subgraphs between queries so the memo gets exercised.
  for (int i = 0; i < 300; ++i) {
    ts.push_back(types.make_union(ts[testing::pick(rng, 300)], ts[testing::pick(rng, 300)]));
  }
  for (TypeId t : ts) {
    EmptinessChecker fresh(types);
    ASSERT_EQ(checker.not_empty(t), fresh.not_empty(t));
  }
}

// Families for the visit counts.

TypeId chain(TypeStore& s, std::size_t n, bool cyclic) {
  TypeId head = s.reserve();
  TypeId cur = head;
  for (std::size_t i = 1; i < n; ++i) {
    TypeId next = s.reserve();
    s.define(cur, testing::obj_node("c", {{"f", next}}));
    cur = next;
  }
  s.define(cur, cyclic ? testing::obj_node("c", {{"f", head}}) : testing::int_node());
  return head;
}

// U_i = U_{i+1} \/ U_{i+1}, last one back to U_0: every result depends on
// the root, the case that defeats result caching.
TypeId doubling_loop(TypeStore& s, std::size_t n) {
  std::vector<TypeId> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(s.reserve());
  for (std::size_t i = 0; i < n; ++i) {
    TypeId next = u[(i + 1) % n];
    s.define(u[i], testing::union_node(next, next));
  }
  return u[0];
}

TEST_F(EmptyTest, VisitsAreLinear) {
  for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
    for (bool cyclic : {false, true}) {
      TypeId t = chain(types, n, cyclic);
      EmptinessChecker c(types);
      EXPECT_TRUE(c.not_empty(t));
      EXPECT_LE(c.last_visits(), 4 * testing::edge_count(types, t) + 4);
    }
    TypeId d = doubling_loop(types, n);
    EmptinessChecker c(types);
    EXPECT_FALSE(c.not_empty(d));
    EXPECT_LE(c.last_visits(), 4 * testing::edge_count(types, d) + 20);
  }
}

}  // namespace
}  // namespace coinfer
