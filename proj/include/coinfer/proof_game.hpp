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

// Finite AND-OR proof graphs with a contractiveness side condition.
//
// Judgments are OR nodes (some rule instance must apply), rule instances
// are AND nodes (every premise must hold). A judgment is derivable when
// there is a possibly infinite derivation in which every infinite branch
// uses a productive rule infinitely often. On a finite graph this is a
// Buchi game: the prover picks rules, the refuter picks premises, and the
// prover wins iff productive rules recur. solve() computes the winning
// region by the classic attractor iteration, O(nodes * edges).

#ifndef COINFER_PROOF_GAME_HPP_
#define COINFER_PROOF_GAME_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace coinfer {

class ProofGame {
 public:
  using Index = std::uint32_t;
  static constexpr Index kUnranked = std::numeric_limits<Index>::max();

  Index add_judgment() {
    nodes_.push_back(Node{});
    return static_cast<Index>(nodes_.size() - 1);
  }

  /// Adds a rule instance for `judgment`. Rules are remembered in insertion
  /// order, which is the preference order used by chosen_rule().
  Index add_rule(Index judgment, bool productive, std::vector<Index> premises,
                 int tag) {
    Node r;
    r.is_rule = true;
    r.productive = productive;
    r.tag = tag;
    r.succ = std::move(premises);
    nodes_.push_back(std::move(r));
    Index id = static_cast<Index>(nodes_.size() - 1);
    nodes_[judgment].succ.push_back(id);
    return id;
  }

  std::size_t size() const { return nodes_.size(); }
  int tag(Index rule) const { return nodes_[rule].tag; }
  bool productive(Index rule) const { return nodes_[rule].productive; }
  const std::vector<Index>& successors(Index n) const { return nodes_[n].succ; }

  void solve() {
    const std::size_t n = nodes_.size();
    std::vector<std::vector<Index>> pred(n);
    for (Index v = 0; v < n; ++v) {
      for (Index w : nodes_[v].succ) pred[w].push_back(v);
    }
    alive_.assign(n, true);
    std::vector<std::uint32_t> count(n);
    std::vector<Index> queue;
    while (true) {
      // Prover attractor of the productive rules, with BFS ranks.
      rank_.assign(n, kUnranked);
      queue.clear();
      for (Index v = 0; v < n; ++v) {
        if (!alive_[v]) continue;
        count[v] = alive_successors(v);
        if (nodes_[v].is_rule && (nodes_[v].productive || count[v] == 0)) {
          rank_[v] = 0;
          queue.push_back(v);
        }
      }
      for (std::size_t head = 0; head < queue.size(); ++head) {
        Index x = queue[head];
        for (Index p : pred[x]) {
          if (!alive_[p] || rank_[p] != kUnranked) continue;
          if (nodes_[p].is_rule && --count[p] != 0) continue;
          rank_[p] = rank_[x] + 1;
          queue.push_back(p);
        }
      }
      // Whatever is left cannot even reach a productive rule; the refuter
      // wins there and on everything it can force into it.
      queue.clear();
      for (Index v = 0; v < n; ++v) {
        if (alive_[v] && rank_[v] == kUnranked) queue.push_back(v);
      }
      if (queue.empty()) break;
      std::vector<bool> lost(n, false);
      for (Index v : queue) lost[v] = true;
      for (Index v = 0; v < n; ++v) {
        if (alive_[v]) count[v] = alive_successors(v);
      }
      for (std::size_t head = 0; head < queue.size(); ++head) {
        Index x = queue[head];
        for (Index p : pred[x]) {
          if (!alive_[p] || lost[p]) continue;
          if (!nodes_[p].is_rule && --count[p] != 0) continue;
          lost[p] = true;
          queue.push_back(p);
        }
      }
      for (Index v = 0; v < n; ++v) {
        if (lost[v]) alive_[v] = false;
      }
    }
    solved_ = true;
  }

  bool solved() const { return solved_; }
  bool wins(Index judgment) const { return alive_[judgment]; }

  /// A rule realizing a contractive derivation from a winning judgment:
  /// the first rule, in insertion order, ranked below the judgment. Chasing
  /// these choices never closes a cycle made of unproductive rules only.
  std::optional<Index> chosen_rule(Index judgment) const {
    if (!alive_[judgment]) return std::nullopt;
    for (Index r : nodes_[judgment].succ) {
      if (alive_[r] && rank_[r] < rank_[judgment]) return r;
    }
    return std::nullopt;
  }

 private:
  struct Node {
    bool is_rule = false;
    bool productive = false;
    int tag = 0;
    std::vector<Index> succ;
  };

  std::uint32_t alive_successors(Index v) const {
    std::uint32_t c = 0;
    for (Index w : nodes_[v].succ) c += alive_[w] ? 1 : 0;
    return c;
  }

  std::vector<Node> nodes_;
  std::vector<bool> alive_;
  std::vector<Index> rank_;
  bool solved_ = false;
};

}  // namespace coinfer

#endif  // COINFER_PROOF_GAME_HPP_
