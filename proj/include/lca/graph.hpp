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

// Instances the LCAs run on. Everything is materialized in memory, but the
// algorithms only ever touch an instance through per-vertex lookups
// (neighbors, incident sets, members, a ball's choices, a bin's balls).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lca/error.hpp"

namespace lca {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;

// Simple undirected graph in CSR form with sorted adjacency lists.
class LocalGraph {
 public:
  LocalGraph() : offsets_(1, 0) {}

  // Rejects self-loops, duplicate edges and out-of-range endpoints.
  static LocalGraph from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges) {
    LCA_REQUIRE(n < (std::size_t{1} << 32), "graph too large for 32-bit vertex ids");
    std::vector<std::pair<VertexId, VertexId>> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      LCA_REQUIRE(u < n && v < n, "edge endpoint out of range");
      LCA_REQUIRE(u != v, "self-loop " + std::to_string(u));
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    LCA_REQUIRE(std::adjacent_find(canon.begin(), canon.end()) == canon.end(), "duplicate edge");

    LocalGraph g;
    g.n_ = n;
    g.edges_ = std::move(canon);
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : g.edges_) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(g.offsets_[n]);
    g.slot_edge_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeIndex e = 0; e < g.edges_.size(); ++e) {
      auto [u, v] = g.edges_[e];
      g.adjacency_[fill[u]] = v;
      g.slot_edge_[fill[u]++] = e;
      g.adjacency_[fill[v]] = u;
      g.slot_edge_[fill[v]++] = e;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const auto lo = g.offsets_[v];
      const auto hi = g.offsets_[v + 1];
      std::vector<std::pair<VertexId, EdgeIndex>> tmp;
      tmp.reserve(hi - lo);
      for (auto i = lo; i < hi; ++i) tmp.emplace_back(g.adjacency_[i], g.slot_edge_[i]);
      std::sort(tmp.begin(), tmp.end());
      for (auto i = lo; i < hi; ++i) std::tie(g.adjacency_[i], g.slot_edge_[i]) = tmp[i - lo];
      g.max_degree_ = std::max(g.max_degree_, hi - lo);
    }
    return g;
  }

  static LocalGraph from_edges(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    return from_edges(n, std::span<const std::pair<VertexId, VertexId>>(edges));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    check(v);
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  // Edge indices parallel to neighbors(v).
  std::span<const EdgeIndex> incident_edges(VertexId v) const {
    check(v);
    return {slot_edge_.data() + offsets_[v], slot_edge_.data() + offsets_[v + 1]};
  }

  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  // Canonical (min, max) endpoints, sorted lexicographically.
  const std::vector<std::pair<VertexId, VertexId>>& edges() const noexcept { return edges_; }
  std::pair<VertexId, VertexId> endpoints(EdgeIndex e) const {
    LCA_REQUIRE(e < edges_.size(), "edge index out of range");
    return edges_[e];
  }

  std::optional<EdgeIndex> find_edge(VertexId u, VertexId v) const {
    const auto nb = neighbors(u);
    check(v);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return std::nullopt;
    return slot_edge_[offsets_[u] + static_cast<std::size_t>(it - nb.begin())];
  }

 private:
  void check(VertexId v) const {
    if (v >= n_) {
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range (n=" + std::to_string(n_) + ")");
    }
  }

  std::size_t n_ = 0;
  std::size_t max_degree_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<EdgeIndex> slot_edge_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
};

struct Literal {
  VertexId var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  bool satisfied_by(bool value) const noexcept { return value != negated; }
};

inline VertexId var_of(VertexId v) noexcept { return v; }
inline VertexId var_of(const Literal& l) noexcept { return l.var; }

// k-uniform family of sets over [0, m) with the vertex -> set incidence
// lists kept as the exact transpose. Instantiated as a hypergraph (slots are
// vertex ids) and as a k-CNF formula (slots are literals).
template <typename Slot>
class SetSystem {
 public:
  using slot_type = Slot;
  SetSystem() = default;

  SetSystem(std::size_t vertex_count, std::vector<std::vector<Slot>> sets)
      : m_(vertex_count), sets_(std::move(sets)), incidence_(vertex_count) {
    LCA_REQUIRE(vertex_count < (std::size_t{1} << 32), "too many vertices");
    for (std::size_t e = 0; e < sets_.size(); ++e) {
      auto& s = sets_[e];
      LCA_REQUIRE(!s.empty(), "set " + std::to_string(e) + " is empty");
      if (e == 0) k_ = s.size();
      LCA_REQUIRE(s.size() == k_, "set " + std::to_string(e) + " breaks k-uniformity");
      std::vector<VertexId> vars;
      vars.reserve(s.size());
      for (const auto& slot : s) {
        LCA_REQUIRE(var_of(slot) < m_, "set " + std::to_string(e) + " references an unknown vertex");
        vars.push_back(var_of(slot));
      }
      std::sort(vars.begin(), vars.end());
      LCA_REQUIRE(std::adjacent_find(vars.begin(), vars.end()) == vars.end(),
                  "set " + std::to_string(e) + " repeats a vertex");
      for (auto v : vars) incidence_[v].push_back(static_cast<std::uint32_t>(e));
    }
  }

  std::size_t vertex_count() const noexcept { return m_; }
  std::size_t set_count() const noexcept { return sets_.size(); }
  std::size_t uniformity() const noexcept { return k_; }

  std::span<const Slot> members(std::uint32_t e) const {
    LCA_REQUIRE(e < sets_.size(), "set index out of range");
    return sets_[e];
  }

  std::span<const std::uint32_t> incident(VertexId v) const {
    LCA_REQUIRE(v < m_, "vertex out of range");
    return incidence_[v];
  }

  // Sets sharing at least one vertex with e, ascending, e excluded.
  std::vector<std::uint32_t> dependents(std::uint32_t e) const {
    std::vector<std::uint32_t> out;
    for (const auto& slot : members(e)) {
      for (auto f : incidence_[var_of(slot)]) {
        if (f != e) out.push_back(f);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::size_t max_dependency_degree() const {
    std::size_t best = 0;
    for (std::uint32_t e = 0; e < sets_.size(); ++e) best = std::max(best, dependents(e).size());
    return best;
  }

  const std::vector<std::vector<Slot>>& sets() const noexcept { return sets_; }

 private:
  std::size_t m_ = 0;
  std::size_t k_ = 0;
  std::vector<std::vector<Slot>> sets_;
  std::vector<std::vector<std::uint32_t>> incidence_;
};

using Hypergraph = SetSystem<VertexId>;
using CnfFormula = SetSystem<Literal>;

// Bipartite ball -> bin choice graph for power-of-d-choices allocation.
// Optional bin metadata: integer capacities (summing to the ball count),
// group ids for always-go-left, circle positions.
class BipartiteChoices {
 public:
  BipartiteChoices() : bin_offsets_(1, 0) {}

  BipartiteChoices(std::size_t n_balls, std::size_t m_bins, std::size_t d, std::vector<std::uint32_t> choices,
                   std::vector<std::uint64_t> capacities = {}, std::vector<std::uint32_t> groups = {},
                   std::vector<double> positions = {})
      : n_balls_(n_balls),
        m_bins_(m_bins),
        d_(d),
        choices_(std::move(choices)),
        capacities_(std::move(capacities)),
        groups_(std::move(groups)),
        positions_(std::move(positions)) {
    LCA_REQUIRE(d_ >= 1, "each ball needs d >= 1 choices");
    LCA_REQUIRE(m_bins_ >= 1 || n_balls_ == 0, "balls need at least one bin");
    LCA_REQUIRE(choices_.size() == n_balls_ * d_, "every ball must have exactly d choices");
    for (auto b : choices_) LCA_REQUIRE(b < m_bins_, "bin choice out of range");
    if (!capacities_.empty()) {
      LCA_REQUIRE(capacities_.size() == m_bins_, "capacity vector length must equal bin count");
      std::uint64_t total = 0;
      for (auto c : capacities_) {
        LCA_REQUIRE(c >= 1, "bin capacities must be positive");
        total += c;
      }
      LCA_REQUIRE(total == n_balls_, "capacities must sum to the number of balls");
    }
    if (!groups_.empty()) LCA_REQUIRE(groups_.size() == m_bins_, "group vector length must equal bin count");
    if (!positions_.empty()) LCA_REQUIRE(positions_.size() == m_bins_, "position vector length must equal bin count");

    // Transpose; a ball that picks the same bin twice is listed once.
    bin_offsets_.assign(m_bins_ + 1, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(choices_.size());
    for (std::uint32_t ball = 0; ball < n_balls_; ++ball) {
      for (std::size_t j = 0; j < d_; ++j) pairs.emplace_back(choices_[ball * d_ + j], ball);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    bin_balls_.reserve(pairs.size());
    for (auto [bin, ball] : pairs) {
      ++bin_offsets_[bin + 1];
      bin_balls_.push_back(ball);
    }
    for (std::size_t i = 0; i < m_bins_; ++i) bin_offsets_[i + 1] += bin_offsets_[i];
  }

  std::size_t n_balls() const noexcept { return n_balls_; }
  std::size_t m_bins() const noexcept { return m_bins_; }
  std::size_t d() const noexcept { return d_; }

  std::span<const std::uint32_t> choices_of(std::uint32_t ball) const {
    LCA_REQUIRE(ball < n_balls_, "ball out of range");
    return {choices_.data() + static_cast<std::size_t>(ball) * d_, d_};
  }

  // Balls that chose this bin, ascending.
  std::span<const std::uint32_t> balls_of(std::uint32_t bin) const {
    LCA_REQUIRE(bin < m_bins_, "bin out of range");
    return {bin_balls_.data() + bin_offsets_[bin], bin_balls_.data() + bin_offsets_[bin + 1]};
  }

  const std::vector<std::uint64_t>& capacities() const noexcept { return capacities_; }
  const std::vector<std::uint32_t>& groups() const noexcept { return groups_; }
  const std::vector<double>& positions() const noexcept { return positions_; }

  std::uint64_t capacity(std::uint32_t bin) const { return capacities_.empty() ? 1 : capacities_.at(bin); }

 private:
  std::size_t n_balls_ = 0;
  std::size_t m_bins_ = 0;
  std::size_t d_ = 1;
  std::vector<std::uint32_t> choices_;
  std::vector<std::uint64_t> capacities_;
  std::vector<std::uint32_t> groups_;
  std::vector<double> positions_;
  std::vector<std::size_t> bin_offsets_;
  std::vector<std::uint32_t> bin_balls_;
};

}  // namespace lca
