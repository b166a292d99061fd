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

// Rank-dependency closures ("query trees" made concrete) and the idealized
// Galton-Watson trees that bound them.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "lca/error.hpp"
#include "lca/generators.hpp"
#include "lca/graph.hpp"
#include "lca/parallel.hpp"
#include "lca/rank_oracle.hpp"
#include "lca/seed.hpp"

namespace lca {

template <typename G>
concept NeighborOracle = requires(const G& g, VertexId v) {
  { g.size() } -> std::convertible_to<std::size_t>;
  g.neighbors(v);
};

template <typename R>
concept RankFunction = requires(const R& r, std::uint64_t id) {
  { r(id) } -> std::convertible_to<Rank>;
};

struct RelevantSet {
  std::uint64_t root = 0;
  std::vector<std::pair<std::uint64_t, Rank>> members;  // ascending by rank
  std::uint64_t probes = 0;
  bool truncated = false;

  std::size_t size() const noexcept { return members.size(); }

  bool contains(std::uint64_t id) const {
    return std::any_of(members.begin(), members.end(), [&](const auto& m) { return m.first == id; });
  }
};

namespace detail {

inline void sort_by_rank(std::vector<std::pair<std::uint64_t, Rank>>& members) {
  std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
}

}  // namespace detail

// BFS from root that admits a neighbor w of a tree node p iff w is new and
// rank(w) < rank(p). The result is exactly the set of vertices whose online
// outputs the root's output depends on. Stops with truncated = true once the
// member count exceeds cap.
template <NeighborOracle G, RankFunction R>
RelevantSet explore(const G& g, VertexId root, const R& rank, std::size_t cap) {
  LCA_REQUIRE(root < g.size(), "explore: root out of range");
  LCA_REQUIRE(cap >= 1, "explore: cap must be >= 1");
  RelevantSet out;
  out.root = root;
  std::unordered_map<std::uint64_t, Rank> seen;
  std::deque<std::pair<VertexId, Rank>> frontier;
  const Rank root_rank = rank(root);
  seen.emplace(root, root_rank);
  out.members.emplace_back(root, root_rank);
  frontier.emplace_back(root, root_rank);
  while (!frontier.empty() && !out.truncated) {
    auto [p, rp] = frontier.front();
    frontier.pop_front();
    ++out.probes;
    for (auto w : g.neighbors(p)) {
      if (seen.count(w)) continue;
      const Rank rw = rank(w);
      if (!(rw < rp)) continue;
      seen.emplace(w, rw);
      out.members.emplace_back(w, rw);
      frontier.emplace_back(static_cast<VertexId>(w), rw);
      if (out.members.size() > cap) {
        out.truncated = true;
        break;
      }
    }
  }
  detail::sort_by_rank(out.members);
  return out;
}

// Alternating ball/bin BFS: from a ball, visit its chosen bins; from a bin,
// admit the balls that chose it with rank below the ball that reached the
// bin. Bins are carriers only; members lists balls. Each choices_of and
// balls_of lookup is one probe.
template <RankFunction R>
RelevantSet explore_bipartite(const BipartiteChoices& bc, std::uint32_t root_ball, const R& rank, std::size_t cap) {
  LCA_REQUIRE(root_ball < bc.n_balls(), "explore_bipartite: ball out of range");
  LCA_REQUIRE(cap >= 1, "explore_bipartite: cap must be >= 1");
  RelevantSet out;
  out.root = root_ball;
  std::unordered_map<std::uint64_t, Rank> seen;
  std::deque<std::pair<std::uint32_t, Rank>> frontier;
  const Rank root_rank = rank(root_ball);
  seen.emplace(root_ball, root_rank);
  out.members.emplace_back(root_ball, root_rank);
  frontier.emplace_back(root_ball, root_rank);
  while (!frontier.empty() && !out.truncated) {
    auto [ball, rb] = frontier.front();
    frontier.pop_front();
    ++out.probes;
    for (auto bin : bc.choices_of(ball)) {
      ++out.probes;
      for (auto w : bc.balls_of(bin)) {
        if (seen.count(w)) continue;
        const Rank rw = rank(w);
        if (!(rw < rb)) continue;
        seen.emplace(w, rw);
        out.members.emplace_back(w, rw);
        frontier.emplace_back(w, rw);
        if (out.members.size() > cap) {
          out.truncated = true;
          break;
        }
      }
      if (out.truncated) break;
    }
  }
  detail::sort_by_rank(out.members);
  return out;
}

// ---------------------------------------------------------------------------
// Galton-Watson trees

// d child slots, each kept independently with probability 1/L.
struct RegularOffspring {
  std::uint32_t d = 1;
  double L = 1.0;
};

// Offspring count ~ B(n, q).
struct BinomialOffspring {
  std::uint64_t n = 1;
  double q = 0.0;
};

using OffspringLaw = std::variant<RegularOffspring, BinomialOffspring>;

inline double mean_offspring(const OffspringLaw& law) {
  if (const auto* r = std::get_if<RegularOffspring>(&law)) return r->d / r->L;
  const auto& b = std::get<BinomialOffspring>(law);
  return static_cast<double>(b.n) * b.q;
}

struct GwTreeSample {
  std::uint64_t size = 1;
  std::uint32_t depth = 0;
  bool extinct = true;  // false when the cap cut the tree off
};

// Level-by-level simulation: a level of N nodes has B(N * slots, p)
// children in total, which is the sum of N independent offspring draws.
inline GwTreeSample sample_gw_tree(const Seed& seed, const OffspringLaw& law, std::uint64_t cap) {
  LCA_REQUIRE(cap >= 1, "sample_gw_tree: cap must be >= 1");
  std::uint64_t slots;
  double p;
  if (const auto* r = std::get_if<RegularOffspring>(&law)) {
    LCA_REQUIRE(r->L >= 1.0, "regular offspring needs L >= 1");
    slots = r->d;
    p = 1.0 / r->L;
  } else {
    const auto& b = std::get<BinomialOffspring>(law);
    LCA_REQUIRE(b.q >= 0.0 && b.q <= 1.0, "binomial offspring needs q in [0, 1]");
    slots = b.n;
    p = b.q;
  }
  SeedStream rng(derive_subseed(seed, "gw"));
  GwTreeSample out;
  std::uint64_t level = 1;
  while (level > 0) {
    std::uint64_t children = 0;
    if (p > 0.0 && slots > 0) {
      std::binomial_distribution<std::uint64_t> draw(level * slots, p);
      children = draw(rng);
    }
    if (children == 0) break;
    ++out.depth;
    if (out.size + children > cap) {
      out.size = cap;
      out.extinct = false;
      break;
    }
    out.size += children;
    level = children;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregate statistics

struct TreeStats {
  std::uint64_t trials = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // size -> count
  std::uint64_t max_size = 0;
  double mean_size = 0.0;
  std::vector<std::pair<std::uint64_t, double>> tail;  // threshold -> Pr[size >= threshold]
  std::uint64_t truncated = 0;
  std::uint64_t max_probes = 0;
  double mean_probes = 0.0;
};

// Order-independent: only the multiset of (size, probes, truncated) matters.
inline TreeStats summarize(const std::vector<std::uint64_t>& sizes, const std::vector<std::uint64_t>& probes,
                           const std::vector<bool>& truncated, const std::vector<std::uint64_t>& thresholds) {
  TreeStats s;
  s.trials = sizes.size();
  long double sum = 0, probe_sum = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ++s.histogram[sizes[i]];
    s.max_size = std::max(s.max_size, sizes[i]);
    sum += sizes[i];
    if (i < probes.size()) {
      s.max_probes = std::max(s.max_probes, probes[i]);
      probe_sum += probes[i];
    }
    if (i < truncated.size() && truncated[i]) ++s.truncated;
  }
  if (s.trials) {
    s.mean_size = static_cast<double>(sum / s.trials);
    s.mean_probes = static_cast<double>(probe_sum / s.trials);
  }
  for (auto t : thresholds) {
    std::uint64_t over = 0;
    for (auto it = s.histogram.lower_bound(t); it != s.histogram.end(); ++it) over += it->second;
    s.tail.emplace_back(t, s.trials ? static_cast<double>(over) / static_cast<double>(s.trials) : 0.0);
  }
  return s;
}

enum class GraphModel { BoundedDegree, Binomial };

struct TreeExperiment {
  GraphModel model = GraphModel::BoundedDegree;
  std::size_t n = 1024;
  double d = 5;
  std::uint64_t trials = 1;
  std::uint64_t instances = 1;  // trial t runs on instance t % instances
  std::size_t cap = std::size_t{1} << 30;
  OrderingKind ordering = FullPseudorandom{};
  std::vector<std::uint64_t> thresholds;
  unsigned jobs = 1;
};

inline LocalGraph make_graph(GraphModel model, const Seed& seed, std::size_t n, double d) {
  if (model == GraphModel::Binomial) return gen_binomial(seed, n, d);
  return gen_bounded_degree(seed, n, static_cast<std::size_t>(d));
}

// Explores `trials` (instance, root, ranks) triples. Trial t draws its root
// and ranks from derive_subseed(seed, "trial", t).
inline TreeStats tree_stats(const Seed& seed, const TreeExperiment& spec) {
  LCA_REQUIRE(spec.trials >= 1, "tree_stats: trials must be >= 1");
  LCA_REQUIRE(spec.instances >= 1, "tree_stats: instances must be >= 1");
  const std::uint64_t instance_count = std::min(spec.instances, spec.trials);
  std::vector<LocalGraph> graphs(instance_count);
  parallel_for(instance_count, spec.jobs, [&](std::size_t i) {
    graphs[i] = make_graph(spec.model, derive_subseed(seed, "instance", i), spec.n, spec.d);
  });
  std::vector<std::uint64_t> sizes(spec.trials), probes(spec.trials);
  std::vector<char> trunc(spec.trials);
  parallel_for(spec.trials, spec.jobs, [&](std::size_t t) {
    const auto& g = graphs[t % instance_count];
    const Seed trial = derive_subseed(seed, "trial", t);
    const RankOracle ranks(derive_subseed(trial, "ranks"), spec.ordering, g.size());
    const auto root = static_cast<VertexId>(random_in_range(trial, "root", g.size()));
    const auto rs = explore(g, root, ranks, spec.cap);
    sizes[t] = rs.size();
    probes[t] = rs.probes;
    trunc[t] = rs.truncated;
  });
  return summarize(sizes, probes, std::vector<bool>(trunc.begin(), trunc.end()), spec.thresholds);
}

// Samples `trials` GW trees; tree t uses derive_subseed(seed, "tree", t).
inline TreeStats gw_stats(const Seed& seed, const OffspringLaw& law, std::uint64_t trials, std::uint64_t cap,
                          const std::vector<std::uint64_t>& thresholds, unsigned jobs = 1) {
  LCA_REQUIRE(trials >= 1, "gw_stats: trials must be >= 1");
  std::vector<std::uint64_t> sizes(trials);
  std::vector<char> cut(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const auto s = sample_gw_tree(derive_subseed(seed, "tree", t), law, cap);
    sizes[t] = s.size;
    cut[t] = !s.extinct;
  });
  return summarize(sizes, {}, std::vector<bool>(cut.begin(), cut.end()), thresholds);
}

// Least-squares slope of log2 Pr[size >= s] against s over [lo, hi], using
// only thresholds with a nonzero exceedance count.
inline double log_tail_slope(const TreeStats& stats, std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::pair<double, double>> pts;
  std::uint64_t over = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ge;  // s -> count(size >= s)
  for (auto it = stats.histogram.rbegin(); it != stats.histogram.rend(); ++it) {
    over += it->second;
    ge.emplace_back(it->first, over);
  }
  for (std::uint64_t s = lo; s <= hi; ++s) {
    std::uint64_t count = 0;
    for (auto& [size, c] : ge) {
      if (size >= s) count = c;
      else break;
    }
    if (count == 0) continue;
    pts.emplace_back(static_cast<double>(s), std::log2(static_cast<double>(count) / static_cast<double>(stats.trials)));
  }
  LCA_REQUIRE(pts.size() >= 2, "log_tail_slope: need at least two populated thresholds");
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace lca
