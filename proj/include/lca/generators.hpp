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

// Seeded random instance generators. Each is a pure function of its seed
// and parameters; randomness comes from SeedStream only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lca/error.hpp"
#include "lca/graph.hpp"
#include "lca/seed.hpp"

namespace lca {

namespace detail {

// Configuration-model pairing: every node gets `degree` stubs, stubs are
// shuffled and paired in order; self-loops and repeated pairs are dropped.
inline std::vector<std::pair<VertexId, VertexId>> random_pairing(std::size_t n, std::size_t degree,
                                                                  SeedStream& rng) {
  std::vector<VertexId> stubs;
  stubs.reserve(n * degree);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < degree; ++j) stubs.push_back(static_cast<VertexId>(v));
  }
  shuffle(stubs, rng);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    auto u = stubs[i];
    auto v = stubs[i + 1];
    if (u == v) continue;
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

// Random graph with maximum degree <= d (random stub pairing with rejection).
inline LocalGraph gen_bounded_degree(const Seed& seed, std::size_t n, std::size_t d) {
  LCA_REQUIRE(n >= 1, "gen_bounded_degree: n must be >= 1");
  LCA_REQUIRE(d >= 1, "gen_bounded_degree: d must be >= 1");
  SeedStream rng(derive_subseed(seed, "gen/bounded-degree"));
  return LocalGraph::from_edges(n, detail::random_pairing(n, d, rng));
}

// G(n, p) with p = d / n; pairs are enumerated lexicographically with
// geometric skips so the cost is proportional to the edge count.
inline LocalGraph gen_binomial(const Seed& seed, std::size_t n, double d) {
  LCA_REQUIRE(n >= 2, "gen_binomial: n must be >= 2");
  LCA_REQUIRE(d > 0 && d < static_cast<double>(n), "gen_binomial: need 0 < d < n");
  const double p = d / static_cast<double>(n);
  SeedStream rng(derive_subseed(seed, "gen/binomial"));
  const double log_q = std::log1p(-p);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(d * static_cast<double>(n) * 0.6) + 16);
  std::uint64_t u = 0;
  std::uint64_t v = 0;  // candidate pair is (u, v) with v > u once advanced
  for (;;) {
    const double r = 1.0 - rng.uniform01();  // (0, 1]
    auto skip = static_cast<std::uint64_t>(std::floor(std::log(r) / log_q));
    v += skip + 1;
    while (u < n && v >= n) {
      v = v - n + u + 2;
      ++u;
    }
    if (u >= n - 1) break;
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  return LocalGraph::from_edges(n, edges);
}

inline LocalGraph path_graph(std::size_t n) {
  LCA_REQUIRE(n >= 1, "path_graph: n must be >= 1");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  return LocalGraph::from_edges(n, edges);
}

enum class ChoiceScheme {
  Uniform,       // d distinct bins uniformly at random
  Groups,        // bins split into d contiguous groups; choice i from group i
  Capacity,      // d distinct bins, probability proportional to capacity
  Circle,        // bins at random circle points; each choice is the bin nearest a random point
};

struct ChoiceOptions {
  ChoiceScheme scheme = ChoiceScheme::Uniform;
  std::vector<std::uint64_t> capacities;  // Capacity scheme; empty means all ones
};

// Group of `bin` when m bins are split into d groups of almost equal size.
inline std::uint32_t group_of(std::size_t bin, std::size_t m_bins, std::size_t d) {
  return static_cast<std::uint32_t>(bin * d / m_bins);
}

inline BipartiteChoices gen_bipartite_choices(const Seed& seed, std::size_t n_balls, std::size_t m_bins,
                                              std::size_t d, const ChoiceOptions& options = {}) {
  LCA_REQUIRE(d >= 1, "gen_bipartite_choices: d must be >= 1");
  LCA_REQUIRE(m_bins >= 1, "gen_bipartite_choices: need at least one bin");
  LCA_REQUIRE(n_balls < (std::size_t{1} << 32) && m_bins < (std::size_t{1} << 32), "instance too large");
  SeedStream rng(derive_subseed(seed, "gen/choices"));
  std::vector<std::uint32_t> choices;
  choices.reserve(n_balls * d);
  std::vector<std::uint64_t> capacities;
  std::vector<std::uint32_t> groups;
  std::vector<double> positions;

  auto distinct_draw = [&](auto draw) {
    std::vector<std::uint32_t> picked;
    while (picked.size() < d) {
      const std::uint32_t b = draw();
      if (std::find(picked.begin(), picked.end(), b) == picked.end()) picked.push_back(b);
    }
    choices.insert(choices.end(), picked.begin(), picked.end());
  };

  switch (options.scheme) {
    case ChoiceScheme::Uniform: {
      LCA_REQUIRE(m_bins >= d, "distinct choices need m_bins >= d");
      for (std::size_t ball = 0; ball < n_balls; ++ball) {
        distinct_draw([&] { return static_cast<std::uint32_t>(rng.below(m_bins)); });
      }
      break;
    }
    case ChoiceScheme::Groups: {
      LCA_REQUIRE(m_bins >= d, "group mode needs at least one bin per group (m_bins >= d)");
      groups.resize(m_bins);
      std::vector<std::size_t> group_start(d + 1, m_bins);
      for (std::size_t b = m_bins; b-- > 0;) {
        groups[b] = group_of(b, m_bins, d);
        group_start[groups[b]] = b;
      }
      for (std::size_t ball = 0; ball < n_balls; ++ball) {
        for (std::size_t g = 0; g < d; ++g) {
          const auto lo = group_start[g];
          const auto hi = group_start[g + 1];
          choices.push_back(static_cast<std::uint32_t>(lo + rng.below(hi - lo)));
        }
      }
      break;
    }
    case ChoiceScheme::Capacity: {
      LCA_REQUIRE(m_bins >= d, "distinct choices need m_bins >= d");
      capacities = options.capacities.empty() ? std::vector<std::uint64_t>(m_bins, 1) : options.capacities;
      LCA_REQUIRE(capacities.size() == m_bins, "capacity vector length must equal bin count");
      std::vector<std::uint64_t> cumulative(m_bins);
      std::uint64_t total = 0;
      for (std::size_t b = 0; b < m_bins; ++b) {
        LCA_REQUIRE(capacities[b] >= 1, "bin capacities must be positive");
        total += capacities[b];
        cumulative[b] = total;
      }
      for (std::size_t ball = 0; ball < n_balls; ++ball) {
        distinct_draw([&] {
          const auto x = rng.below(total);
          return static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                            cumulative.begin());
        });
      }
      break;
    }
    case ChoiceScheme::Circle: {
      positions.resize(m_bins);
      for (auto& p : positions) p = rng.uniform01();
      std::sort(positions.begin(), positions.end());
      for (std::size_t ball = 0; ball < n_balls; ++ball) {
        for (std::size_t j = 0; j < d; ++j) {
          const double x = rng.uniform01();
          auto it = std::lower_bound(positions.begin(), positions.end(), x);
          const std::size_t hi = (it == positions.end()) ? 0 : static_cast<std::size_t>(it - positions.begin());
          const std::size_t lo = (hi == 0) ? m_bins - 1 : hi - 1;
          auto dist = [&](std::size_t b) {
            const double delta = std::abs(positions[b] - x);
            return std::min(delta, 1.0 - delta);
          };
          choices.push_back(static_cast<std::uint32_t>(dist(lo) <= dist(hi) ? lo : hi));
        }
      }
      break;
    }
  }
  return BipartiteChoices(n_balls, m_bins, d, std::move(choices), std::move(capacities), std::move(groups),
                          std::move(positions));
}

namespace detail {

// Vertex layout for a k-uniform set system with dependency degree <= d:
// a random near-d-regular dependency graph on the n sets, where every
// dependency pair shares s >= 1 fresh vertices and every set fills its
// remaining slots with private vertices. Shares are balanced so exactly m
// vertex ids are used when n*k >= m; otherwise the spare ids stay isolated.
// Returns member lists over randomly permuted ids, or throws GenerationError.
inline std::vector<std::vector<VertexId>> layout_sets(const Seed& seed, std::size_t m, std::size_t n,
                                                      std::size_t k, std::size_t d) {
  LCA_REQUIRE(k >= 2, "set generator needs k >= 2");
  LCA_REQUIRE(n >= 1, "set generator needs n >= 1");
  LCA_REQUIRE(m >= k, "set generator needs m >= k");
  constexpr int kAttempts = 200;
  SeedStream rng(derive_subseed(seed, "gen/sets"));
  const std::int64_t slots = static_cast<std::int64_t>(n * k);
  const std::int64_t reduction = slots - static_cast<std::int64_t>(m);

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    auto pairs = (d == 0 || n == 1) ? std::vector<std::pair<VertexId, VertexId>>{} : random_pairing(n, d, rng);
    shuffle(pairs, rng);
    const std::size_t needed = reduction > 0 ? static_cast<std::size_t>(reduction) : 0;
    if (pairs.size() > needed) pairs.resize(needed);

    std::vector<std::size_t> used(n, 0);
    std::vector<std::size_t> share(pairs.size(), 1);
    bool ok = true;
    for (auto [a, b] : pairs) {
      if (++used[a] > k || ++used[b] > k) ok = false;
    }
    std::size_t remaining = needed - pairs.size();
    while (ok && remaining > 0) {
      bool progress = false;
      for (std::size_t i = 0; i < pairs.size() && remaining > 0; ++i) {
        auto [a, b] = pairs[i];
        if (used[a] < k && used[b] < k) {
          ++share[i];
          ++used[a];
          ++used[b];
          --remaining;
          progress = true;
        }
      }
      if (!progress) ok = false;
    }
    if (!ok) continue;

    std::vector<VertexId> ids(m);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    shuffle(ids, rng);
    std::size_t next = 0;
    std::vector<std::vector<VertexId>> sets(n);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t s = 0; s < share[i]; ++s) {
        const VertexId v = ids[next++];
        sets[pairs[i].first].push_back(v);
        sets[pairs[i].second].push_back(v);
      }
    }
    for (std::size_t e = 0; e < n; ++e) {
      while (sets[e].size() < k) sets[e].push_back(ids[next++]);
      std::sort(sets[e].begin(), sets[e].end());
    }
    return sets;
  }
  throw GenerationError("could not lay out m=" + std::to_string(m) + " n=" + std::to_string(n) +
                        " k=" + std::to_string(k) + " d=" + std::to_string(d) + " after " +
                        std::to_string(kAttempts) + " attempts (need n*k - m shared slots within the " +
                        "dependency-degree budget)");
}

}  // namespace detail

// Random k-uniform hypergraph on m vertices with n edges, each edge
// intersecting at most d others.
inline Hypergraph gen_hypergraph(const Seed& seed, std::size_t m, std::size_t n, std::size_t k, std::size_t d) {
  return Hypergraph(m, detail::layout_sets(derive_subseed(seed, "gen/hypergraph"), m, n, k, d));
}

// Same layout as gen_hypergraph with a uniformly random polarity per literal.
inline CnfFormula gen_cnf(const Seed& seed, std::size_t m, std::size_t n, std::size_t k, std::size_t d) {
  const Seed sub = derive_subseed(seed, "gen/cnf");
  auto sets = detail::layout_sets(sub, m, n, k, d);
  SeedStream rng(derive_subseed(sub, "polarity"));
  std::vector<std::vector<Literal>> clauses(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (auto v : sets[c]) clauses[c].push_back(Literal{v, rng.below(2) == 1});
  }
  return CnfFormula(m, std::move(clauses));
}

}  // namespace lca
