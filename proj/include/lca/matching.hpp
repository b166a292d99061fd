/* Copyright 2026 The lca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Maximal matching LCA: greedy matching over a random arrival order of the
// edges, answered per edge by lazy recursion over lower-ranked adjacent edges.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lca/error.hpp"
#include "lca/graph.hpp"
#include "lca/online_sim.hpp"
#include "lca/rank_oracle.hpp"

namespace lca {

// Canonical (min, max) endpoints.
struct EdgeId {
  VertexId u = 0;
  VertexId v = 0;

  EdgeId() = default;
  EdgeId(VertexId a, VertexId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct MatchVerdict {
  bool matched = false;
  std::uint64_t probes = 0;
  std::uint64_t edges_evaluated = 0;
};

// Line-graph view: vertex e of the view is edge index e of the graph, and
// its neighbors are the other edges touching either endpoint, ascending.
class LineGraphView {
 public:
  explicit LineGraphView(const LocalGraph& g) : g_(&g) {}

  std::size_t size() const noexcept { return g_->edge_count(); }

  std::vector<VertexId> neighbors(VertexId e) const {
    const auto [u, v] = g_->endpoints(e);
    std::vector<VertexId> out;
    for (auto f : g_->incident_edges(u)) {
      if (f != e) out.push_back(f);
    }
    for (auto f : g_->incident_edges(v)) {
      if (f != e) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const LocalGraph* g_;
};

// Edge ranks keyed by the canonical pair u * n + v over a universe of n^2,
// so ranks do not depend on how edges are indexed in memory.
class EdgeRanks {
 public:
  EdgeRanks(const LocalGraph& g, const Seed& seed, const OrderingKind& kind)
      : g_(&g), oracle_(derive_subseed(seed, "edge-ranks"), kind, edge_universe(g.size())) {}

  static std::uint64_t edge_universe(std::size_t n) {
    const auto nn = static_cast<std::uint64_t>(std::max<std::size_t>(n, 1));
    return nn * nn;
  }

  std::uint64_t key(EdgeIndex e) const {
    const auto [u, v] = g_->endpoints(e);
    return static_cast<std::uint64_t>(u) * g_->size() + v;
  }

  Rank operator()(std::uint64_t e) const { return oracle_.rank_of(key(static_cast<EdgeIndex>(e))); }
  Rank operator()(const EdgeId& e) const { return oracle_.rank_of(static_cast<std::uint64_t>(e.u) * g_->size() + e.v); }

 private:
  const LocalGraph* g_;
  RankOracle oracle_;
};

namespace detail {

inline EdgeIndex require_edge(const LocalGraph& g, const EdgeId& e) {
  LCA_REQUIRE(e.u != e.v, "edge endpoints must differ");
  LCA_REQUIRE(e.v < g.size(), "edge endpoint out of range");
  auto idx = g.find_edge(e.u, e.v);
  LCA_REQUIRE(idx.has_value(), "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not an edge");
  return *idx;
}

}  // namespace detail

// e is matched iff none of its lower-ranked adjacent edges is matched.
// Lower neighbors are examined in ascending rank order and the scan stops
// at the first matched one. Explicit stack; memo is per query. Throws
// LocalFailure when more than cap edges need evaluating.
inline MatchVerdict is_matched(const LocalGraph& g, const EdgeId& edge, const EdgeRanks& ranks, std::size_t cap) {
  const EdgeIndex root = detail::require_edge(g, edge);
  LCA_REQUIRE(cap >= 1, "is_matched: cap must be >= 1");
  const LineGraphView view(g);
  MatchVerdict verdict;
  std::unordered_map<EdgeIndex, bool> memo;

  struct Frame {
    EdgeIndex edge;
    std::vector<EdgeIndex> lower;  // ascending rank
    std::size_t next = 0;
  };
  auto open = [&](EdgeIndex e) {
    if (++verdict.edges_evaluated > cap) {
      throw LocalFailure("matching query for edge (" + std::to_string(edge.u) + "," + std::to_string(edge.v) +
                             ") needs more than " + std::to_string(cap) + " edges",
                         verdict.probes, verdict.edges_evaluated);
    }
    verdict.probes += 2;  // one adjacency lookup per endpoint
    const Rank re = ranks(e);
    std::vector<std::pair<Rank, EdgeIndex>> lower;
    for (auto f : view.neighbors(e)) {
      const Rank rf = ranks(f);
      if (rf < re) lower.emplace_back(rf, f);
    }
    std::sort(lower.begin(), lower.end());
    Frame frame{e, {}, 0};
    frame.lower.reserve(lower.size());
    for (auto& [r, f] : lower) frame.lower.push_back(f);
    return frame;
  };

  std::vector<Frame> stack;
  stack.push_back(open(root));
  while (!stack.empty()) {
    Frame& top = stack.back();
    bool decided = false;
    bool value = true;
    while (top.next < top.lower.size()) {
      const EdgeIndex f = top.lower[top.next];
      auto it = memo.find(f);
      if (it == memo.end()) break;
      if (it->second) {
        decided = true;
        value = false;
        break;
      }
      ++top.next;
    }
    if (!decided && top.next < top.lower.size()) {
      const EdgeIndex child = top.lower[top.next];
      stack.push_back(open(child));  // invalidates `top`
      continue;
    }
    memo[top.edge] = value;
    stack.pop_back();
  }
  verdict.matched = memo.at(root);
  return verdict;
}

inline MatchVerdict is_matched(const LocalGraph& g, const EdgeId& edge, const Seed& seed, const OrderingKind& kind,
                               std::size_t cap) {
  return is_matched(g, edge, EdgeRanks(g, seed, kind), cap);
}

// Queries every edge; any LocalFailure propagates.
inline std::vector<EdgeId> full_matching(const LocalGraph& g, const Seed& seed, const OrderingKind& kind,
                                         std::size_t cap) {
  const EdgeRanks ranks(g, seed, kind);
  std::vector<EdgeId> out;
  for (auto [u, v] : g.edges()) {
    if (is_matched(g, EdgeId(u, v), ranks, cap).matched) out.emplace_back(u, v);
  }
  return out;
}

// The oracle: the online greedy run over all edges in rank order.
inline std::vector<EdgeId> greedy_global_matching(const LocalGraph& g, const Seed& seed, const OrderingKind& kind) {
  const auto trace = eval_global(LineGraphView(g), rules::Greedy{}, EdgeRanks(g, seed, kind));
  std::vector<EdgeId> out;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (trace.outputs.at(e)) out.emplace_back(g.endpoints(e).first, g.endpoints(e).second);
  }
  return out;
}

// True iff m is vertex-disjoint, uses only edges of g, and covers an
// endpoint of every edge of g.
inline bool verify_maximal(const LocalGraph& g, const std::vector<EdgeId>& m) {
  std::vector<char> covered(g.size(), 0);
  for (const auto& e : m) {
    if (e.v >= g.size() || e.u == e.v || !g.find_edge(e.u, e.v)) return false;
    if (covered[e.u] || covered[e.v]) return false;
    covered[e.u] = covered[e.v] = 1;
  }
  for (auto [u, v] : g.edges()) {
    if (!covered[u] && !covered[v]) return false;
  }
  return true;
}

}  // namespace lca
