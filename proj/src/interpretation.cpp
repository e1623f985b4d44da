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

#include "coinfer/interpretation.hpp"

#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "coinfer/canonical.hpp"
#include "coinfer/emptiness.hpp"
#include "coinfer/errors.hpp"
#include "coinfer/proof_game.hpp"

namespace coinfer {
namespace {

const ValueField* find_field(const ValueNode& v, const std::string& name) {
  for (const auto& f : v.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

class Sampler {
 public:
  Sampler(TypeStore& types, ValueStore& values, std::uint64_t seed,
          SampleOptions options)
      : types_(types), values_(values), empty_(types), rng_(seed), options_(options) {}

  EmptinessChecker& empty() { return empty_; }

  ValueId sample(TypeId t, double back_edge_probability) {
    back_edge_ = back_edge_probability;
    // A fresh bias per sample spreads the results over shallow and deep
    // members instead of piling up on the shortest ones.
    left_bias_ = std::uniform_real_distribution<double>(0.1, 0.9)(rng_);
    ancestors_.clear();
    return gen(t, 0);
  }

  ValueId witness_of(TypeId t) {
    if (auto it = witness_.find(t); it != witness_.end()) return it->second;
    auto w = empty_.witness(t, values_);
    if (!w) throw std::logic_error("witness requested for an empty type");
    witness_.emplace(t, *w);
    return *w;
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  ValueId gen(TypeId t, std::size_t depth) {
    if (depth >= options_.max_depth) return witness_of(t);
    std::size_t steps = 0;
    while (types_.node(t).kind == TypeKind::kUnion) {
      if (++steps > options_.max_depth) return witness_of(t);
      const TypeNode& n = types_.node(t);
      bool l = empty_.not_empty(n.left);
      bool r = empty_.not_empty(n.right);
      t = (l && r) ? (coin(left_bias_) ? n.left : n.right) : (l ? n.left : n.right);
    }
    const TypeNode n = types_.node(t);
    if (n.kind == TypeKind::kInt) {
      return values_.make_int(std::uniform_int_distribution<std::int64_t>(-100, 100)(rng_));
    }
    for (auto it = ancestors_.rbegin(); it != ancestors_.rend(); ++it) {
      if (it->first == t && coin(back_edge_)) return it->second;
    }
    ValueId self = values_.reserve();
    ancestors_.emplace_back(t, self);
    ValueNode shape;
    shape.kind = ValueKind::kObj;
    shape.class_name = n.class_name;
    for (const auto& f : n.fields) shape.fields.push_back({f.name, gen(f.type, depth + 1)});
    ancestors_.pop_back();
    values_.define(self, std::move(shape));
    return self;
  }

  TypeStore& types_;
  ValueStore& values_;
  EmptinessChecker empty_;
  std::mt19937_64 rng_;
  SampleOptions options_;
  double back_edge_ = 0.25;
  double left_bias_ = 0.5;
  std::vector<std::pair<TypeId, ValueId>> ancestors_;
  std::unordered_map<TypeId, ValueId> witness_;
};

}  // namespace

bool member(const ValueStore& values, const TypeStore& types, ValueId v, TypeId t,
            std::size_t memo_limit) {
  enum Tag { kInt, kOrL, kOrR, kObj };
  ProofGame game;
  std::unordered_map<std::uint64_t, ProofGame::Index> index;
  std::vector<std::pair<ProofGame::Index, std::pair<ValueId, TypeId>>> work;
  auto node_for = [&](ValueId a, TypeId b) {
    std::uint64_t k = (static_cast<std::uint64_t>(a.value) << 32) | b.value;
    auto [it, fresh] = index.emplace(k, 0);
    if (fresh) {
      if (index.size() > memo_limit) throw BudgetExceeded("membership judgments", memo_limit);
      it->second = game.add_judgment();
      work.push_back({it->second, {a, b}});
    }
    return it->second;
  };
  ProofGame::Index root = node_for(v, t);
  while (!work.empty()) {
    auto [j, vt] = work.back();
    work.pop_back();
    const ValueNode& vn = values.node(vt.first);
    const TypeNode& tn = types.node(vt.second);
    if (vn.kind == ValueKind::kPending || tn.kind == TypeKind::kPending) {
      throw std::logic_error("pending node in membership query");
    }
    if (tn.kind == TypeKind::kUnion) {
      game.add_rule(j, false, {node_for(vt.first, tn.left)}, kOrL);
      game.add_rule(j, false, {node_for(vt.first, tn.right)}, kOrR);
    } else if (tn.kind == TypeKind::kInt) {
      if (vn.kind == ValueKind::kInt) game.add_rule(j, true, {}, kInt);
    } else if (vn.kind == ValueKind::kObj && vn.class_name == tn.class_name) {
      std::vector<ProofGame::Index> premises;
      bool covered = true;
      for (const auto& f : tn.fields) {
        const ValueField* vf = find_field(vn, f.name);
        if (vf == nullptr) {
          covered = false;
          break;
        }
        premises.push_back(node_for(vf->value, f.type));
      }
      if (covered) game.add_rule(j, true, std::move(premises), kObj);
    }
  }
  game.solve();
  return game.wins(root);
}

std::vector<ValueId> sample_values(TypeStore& types, ValueStore& values, TypeId t,
                                   std::size_t count, std::uint64_t seed,
                                   SampleOptions options) {
  Sampler sampler(types, values, seed, options);
  if (sampler.empty().is_empty(t)) {
    throw std::invalid_argument("cannot sample values of an empty type");
  }
  std::vector<ValueId> out;
  std::unordered_set<ValueId> seen;
  bool have_cyclic = false;
  auto offer = [&](ValueId v) {
    v = canonicalize(values, v);
    if (seen.contains(v)) return false;
    if (!member(values, types, v, t)) {
      throw std::logic_error("sampled value is not a member of its type");
    }
    seen.insert(v);
    have_cyclic = have_cyclic || is_cyclic(values, v);
    out.push_back(v);
    return true;
  };
  if (count == 0) return out;
  offer(sampler.witness_of(t));
  for (std::size_t attempt = 0; out.size() < count && attempt < 50 * count; ++attempt) {
    offer(sampler.sample(t, options.back_edge_probability));
  }
  if (!have_cyclic && count >= 2) {
    // Always tying back finds a cyclic member whenever an obj node of `t`
    // can reach itself inside the non-empty part.
    for (std::size_t attempt = 0; attempt < 4 * count + 16; ++attempt) {
      ValueId v = canonicalize(values, sampler.sample(t, 1.0));
      if (!is_cyclic(values, v) || seen.contains(v)) continue;
      if (out.size() == count) {
        seen.erase(out.back());
        out.pop_back();
      }
      offer(v);
      break;
    }
  }
  return out;
}

}  // namespace coinfer
