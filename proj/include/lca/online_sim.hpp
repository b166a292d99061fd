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

// Online-to-local conversion. A rule computes a vertex's output from its
// own arrival and the outputs of its lower-ranked neighbors; eval_local
// answers one vertex by replaying the rule over that vertex's relevant set,
// eval_global runs the online algorithm over the whole arrival order.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lca/error.hpp"
#include "lca/rank_oracle.hpp"
#include "lca/relevant_set.hpp"

namespace lca {

struct Arrival {
  std::uint64_t vertex = 0;
  Rank rank;
};

template <typename Out>
struct NeighborOutput {
  std::uint64_t vertex = 0;
  Out output{};
};

// Rules must be pure: the output may depend only on the arguments.
template <typename Rule>
concept OnlineRule = requires(const Rule& rule, const Arrival& a,
                              std::span<const NeighborOutput<typename Rule::output_type>> lower) {
  { rule(a, lower) } -> std::convertible_to<typename Rule::output_type>;
};

template <typename Out>
struct EvalTrace {
  std::unordered_map<std::uint64_t, Out> outputs;
  std::vector<std::uint64_t> evaluation_order;  // strictly rank-ascending
  std::uint64_t probes = 0;
};

namespace detail {

template <typename Out, typename G, typename Lookup>
std::vector<NeighborOutput<Out>> lower_neighbors(const G& g, VertexId v, const Rank& rv, Lookup&& lookup,
                                                 std::uint64_t& probes) {
  std::vector<std::pair<Rank, NeighborOutput<Out>>> lower;
  ++probes;
  for (auto w : g.neighbors(v)) {
    auto hit = lookup(w);
    if (hit.first < rv) lower.emplace_back(hit.first, NeighborOutput<Out>{w, hit.second});
  }
  std::sort(lower.begin(), lower.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<NeighborOutput<Out>> out;
  out.reserve(lower.size());
  for (auto& [r, no] : lower) out.push_back(no);
  return out;
}

}  // namespace detail

// Throws LocalFailure when the relevant set exceeds cap.
template <OnlineRule Rule, NeighborOracle G, RankFunction R>
std::pair<typename Rule::output_type, EvalTrace<typename Rule::output_type>> eval_local(const G& g, VertexId v0,
                                                                                       const Rule& rule,
                                                                                       const R& rank,
                                                                                       std::size_t cap) {
  using Out = typename Rule::output_type;
  const auto rs = explore(g, v0, rank, cap);
  if (rs.truncated) {
    throw LocalFailure("relevant set of vertex " + std::to_string(v0) + " exceeds cap " + std::to_string(cap),
                       rs.probes, rs.size());
  }
  EvalTrace<Out> trace;
  trace.probes = rs.probes;
  std::unordered_map<std::uint64_t, Rank> member_rank;
  member_rank.reserve(rs.size());
  for (const auto& [id, r] : rs.members) member_rank.emplace(id, r);

  for (const auto& [id, r] : rs.members) {
    const auto v = static_cast<VertexId>(id);
    auto lower = detail::lower_neighbors<Out>(
        g, v, r,
        [&](auto w) -> std::pair<Rank, Out> {
          auto it = member_rank.find(w);
          if (it == member_rank.end()) {
            const Rank rw = rank(w);
            if (rw < r) throw std::logic_error("relevant set is not closed under lower-ranked neighbors");
            return {rw, Out{}};
          }
          if (!(it->second < r)) return {it->second, Out{}};
          // Closure property: every lower-ranked neighbor is a member and
          // was evaluated before v.
          return {it->second, trace.outputs.at(w)};
        },
        trace.probes);
    trace.outputs.emplace(id, rule(Arrival{id, r}, std::span<const NeighborOutput<Out>>(lower)));
    trace.evaluation_order.push_back(id);
  }
  return {trace.outputs.at(v0), std::move(trace)};
}

template <OnlineRule Rule, NeighborOracle G, RankFunction R>
EvalTrace<typename Rule::output_type> eval_global(const G& g, const Rule& rule, const R& rank) {
  using Out = typename Rule::output_type;
  EvalTrace<Out> trace;
  std::vector<std::pair<std::uint64_t, Rank>> order;
  order.reserve(g.size());
  std::vector<Rank> ranks(g.size());
  for (std::uint64_t v = 0; v < g.size(); ++v) {
    ranks[v] = rank(v);
    order.emplace_back(v, ranks[v]);
  }
  detail::sort_by_rank(order);
  trace.outputs.reserve(g.size());
  for (const auto& [id, r] : order) {
    const auto v = static_cast<VertexId>(id);
    auto lower = detail::lower_neighbors<Out>(
        g, v, r,
        [&](auto w) -> std::pair<Rank, Out> {
          if (!(ranks[w] < r)) return {ranks[w], Out{}};
          return {ranks[w], trace.outputs.at(w)};
        },
        trace.probes);
    trace.outputs.emplace(id, rule(Arrival{id, r}, std::span<const NeighborOutput<Out>>(lower)));
    trace.evaluation_order.push_back(id);
  }
  return trace;
}

// Convenience overloads that build the rank oracle over [0, g.size()).
template <OnlineRule Rule, NeighborOracle G>
auto eval_local(const G& g, VertexId v0, const Rule& rule, const Seed& seed, const OrderingKind& kind,
                std::size_t cap) {
  return eval_local(g, v0, rule, RankOracle(seed, kind, g.size()), cap);
}

template <OnlineRule Rule, NeighborOracle G>
auto eval_global(const G& g, const Rule& rule, const Seed& seed, const OrderingKind& kind) {
  return eval_global(g, rule, RankOracle(seed, kind, g.size()));
}

namespace rules {

// Greedy maximal independent set on the input graph; on a line graph this
// is greedy maximal matching. true iff no lower-ranked neighbor took true.
struct Greedy {
  using output_type = bool;
  bool operator()(const Arrival&, std::span<const NeighborOutput<bool>> lower) const {
    return std::none_of(lower.begin(), lower.end(), [](const auto& n) { return n.output; });
  }
};

// Length of the longest strictly decreasing-rank chain hanging off the vertex.
struct MaxChain {
  using output_type = std::uint32_t;
  std::uint32_t operator()(const Arrival&, std::span<const NeighborOutput<std::uint32_t>> lower) const {
    std::uint32_t best = 0;
    bool any = false;
    for (const auto& n : lower) {
      best = std::max(best, n.output);
      any = true;
    }
    return any ? best + 1 : 0;
  }
};

struct RankParity {
  using output_type = std::uint32_t;
  std::uint32_t operator()(const Arrival& a, std::span<const NeighborOutput<std::uint32_t>>) const {
    return static_cast<std::uint32_t>(a.rank.value & 1);
  }
};

// Order-sensitive: folds neighbor ids in arrival order, so it detects any
// deviation in the order lower neighbors are presented.
struct OrderedFold {
  using output_type = std::uint64_t;
  std::uint64_t operator()(const Arrival& a, std::span<const NeighborOutput<std::uint64_t>> lower) const {
    std::uint64_t h = a.vertex;
    for (const auto& n : lower) h = absorb(h, n.output ^ n.vertex);
    return h;
  }
};

}  // namespace rules

}  // namespace lca
