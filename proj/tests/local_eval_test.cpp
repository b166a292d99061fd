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


#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "lca/experiments.hpp"
#include "lca/generators.hpp"
#include "lca/matching.hpp"
#include "lca/online_sim.hpp"
#include "lca/relevant_set.hpp"

namespace lca {
namespace {

using Edges = std::vector<std::pair<VertexId, VertexId>>;

struct FixedRanks {
  std::vector<std::uint64_t> values;
  Rank operator()(std::uint64_t id) const { return Rank{values.at(id), id}; }
};

std::vector<std::uint64_t> ids(const RelevantSet& rs) {
  std::vector<std::uint64_t> out;
  for (const auto& [id, r] : rs.members) out.push_back(id);
  return out;
}

TEST(Explore, FollowsDecreasingRanks) {
  const auto path = path_graph(4);
  const FixedRanks r{{3, 1, 2, 0}};
  EXPECT_EQ(ids(explore(path, 0, r, 10)), (std::vector<std::uint64_t>{1, 0}));
  const auto rs = explore(path, 2, r, 10);
  EXPECT_EQ(ids(rs), (std::vector<std::uint64_t>{3, 1, 2}));
  EXPECT_EQ(rs.probes, 3u);
  EXPECT_FALSE(rs.truncated);
  EXPECT_TRUE(rs.contains(3));
  EXPECT_FALSE(rs.contains(0));
}

TEST(Explore, LowestRankedVertexIsAlone) {
  const auto g = LocalGraph::from_edges(4, Edges{{0, 1}, {0, 2}, {0, 3}});
  const auto rs = explore(g, 0, FixedRanks{{0, 5, 6, 7}}, 10);
  EXPECT_EQ(rs.size(), 1u);
}

TEST(Explore, DeduplicatesSharedDescendants) {
  // 3 is below both 1 and 2.
  const auto g = LocalGraph::from_edges(4, Edges{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto rs = explore(g, 0, FixedRanks{{9, 5, 6, 1}}, 10);
  EXPECT_EQ(ids(rs), (std::vector<std::uint64_t>{3, 1, 2, 0}));
}

TEST(Explore, TruncatesBeyondCap) {
  const auto path = path_graph(6);
  const FixedRanks r{{5, 4, 3, 2, 1, 0}};
  EXPECT_FALSE(explore(path, 0, r, 6).truncated);
  EXPECT_TRUE(explore(path, 0, r, 5).truncated);
}

TEST(Explore, BipartiteGoesThroughSharedBins) {
  // Balls 0 and 1 share bin 1; ball 2 only shares bin 3 with nobody.
  const BipartiteChoices bc(3, 4, 2, {0, 1, 1, 2, 3, 0});
  const FixedRanks r{{5, 1, 0}};
  // Ball 0 sees ball 1 (via bin 1) and ball 2 (via bin 0); both are lower.
  EXPECT_EQ(ids(explore_bipartite(bc, 0, r, 10)), (std::vector<std::uint64_t>{2, 1, 0}));
  EXPECT_EQ(ids(explore_bipartite(bc, 2, r, 10)), (std::vector<std::uint64_t>{2}));
}

TEST(GaltonWatson, RegularMeanTotalProgeny) {
  // Offspring B(3, 1/9): mean 1/3, variance 24/81, so the total progeny
  // has mean 3/2 and variance (24/81) / (2/3)^3 = 1.
  const auto s = gw_stats(Seed::from_u64(1), RegularOffspring{3, 9.0}, 100000, 1 << 20, {});
  EXPECT_NEAR(s.mean_size, 1.5, 5 * std::sqrt(1.0 / 100000));
  EXPECT_EQ(s.truncated, 0u);
}

TEST(GaltonWatson, BinomialMatchesRegularMean) {
  const auto s = gw_stats(Seed::from_u64(2), BinomialOffspring{10000, 1.0 / 30000}, 100000, 1 << 20, {});
  EXPECT_NEAR(s.mean_size, 1.5, 5 * std::sqrt(1.0 / 100000));
}

TEST(GaltonWatson, CapCutsTrees) {
  const auto t = sample_gw_tree(Seed::from_u64(3), RegularOffspring{2, 1.0}, 50);
  EXPECT_EQ(t.size, 50u);
  EXPECT_FALSE(t.extinct);
}

TEST(TreeStats, SummarizeAndTailSlope) {
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t s = 1; s <= 16; ++s) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << (16 - s)); ++i) sizes.push_back(s);
  }
  const auto st = summarize(sizes, {}, {}, {1, 2, 4});
  EXPECT_EQ(st.histogram.at(1), 1u << 15);
  EXPECT_EQ(st.max_size, 16u);
  EXPECT_DOUBLE_EQ(st.tail[0].second, 1.0);
  // Pr[size >= s] is almost exactly 2^(1-s).
  EXPECT_NEAR(log_tail_slope(st, 2, 12), -1.0, 0.01);
  EXPECT_THROW(log_tail_slope(st, 40, 50), InvalidArgument);
}

TEST(TreeStats, SingleVertexGraph) {
  TreeExperiment x;
  x.n = 1;
  x.trials = 1;
  const auto s = tree_stats(Seed::from_u64(4), x);
  EXPECT_EQ(s.histogram, (std::map<std::uint64_t, std::uint64_t>{{1, 1}}));
}

TEST(TreeStats, ParallelRunsMatchSerial) {
  TreeExperiment x;
  x.n = 512;
  x.trials = 300;
  x.instances = 3;
  x.thresholds = {1, 8, 64};
  const auto a = tree_stats(Seed::from_u64(5), x);
  x.jobs = 4;
  const auto b = tree_stats(Seed::from_u64(5), x);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_EQ(a.max_probes, b.max_probes);
}

TEST(LowerBound, ThreeVertexPath) {
  const auto r = lower_bound_experiment(3, 100000, Seed::from_u64(6));
  EXPECT_NEAR(r.expected, 1.0 / 6.0, 1e-12);
  EXPECT_LE(std::abs(r.frequency - r.expected), 3 * r.std_error);
  EXPECT_THROW(lower_bound_experiment(1, 10, Seed::from_u64(6)), InvalidArgument);
  EXPECT_THROW(lower_bound_experiment(3, 0, Seed::from_u64(6)), InvalidArgument);
}

template <typename Rule, typename G>
void expect_local_equals_global(const G& g, const Rule& rule, const RankOracle& ranks) {
  const auto global = eval_global(g, rule, ranks);
  for (VertexId v = 0; v < g.size(); ++v) {
    EXPECT_EQ(eval_local(g, v, rule, ranks, g.size()).first, global.outputs.at(v)) << "vertex " << v;
  }
}

TEST(OnlineSim, LocalEqualsGlobalForEveryRule) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Seed seed = Seed::from_u64(100 + s);
    const auto g = gen_binomial(derive_subseed(seed, "g"), 60, 3.0);
    for (const OrderingKind& kind : {OrderingKind{FullPseudorandom{}}, OrderingKind{KWiseIndependent{5, 61}}}) {
      const RankOracle r(derive_subseed(seed, "r"), kind, g.size());
      expect_local_equals_global(g, rules::Greedy{}, r);
      expect_local_equals_global(g, rules::MaxChain{}, r);
      expect_local_equals_global(g, rules::RankParity{}, r);
      expect_local_equals_global(g, rules::OrderedFold{}, r);
    }
  }
}

TEST(OnlineSim, GreedyIsAMaximalIndependentSet) {
  const auto g = gen_bounded_degree(Seed::from_u64(7), 200, 4);
  const auto t = eval_global(g, rules::Greedy{}, Seed::from_u64(8), FullPseudorandom{});
  for (VertexId v = 0; v < g.size(); ++v) {
    bool neighbor_in = false;
    for (auto w : g.neighbors(v)) {
      neighbor_in = neighbor_in || t.outputs.at(w);
      if (t.outputs.at(v)) EXPECT_FALSE(t.outputs.at(w));
    }
    EXPECT_TRUE(t.outputs.at(v) || neighbor_in);
  }
}

TEST(OnlineSim, TraceEvaluatesInRankOrder) {
  const auto path = path_graph(5);
  const FixedRanks r{{4, 3, 2, 1, 0}};
  const auto [out, trace] = eval_local(path, 0, rules::MaxChain{}, r, 10);
  EXPECT_EQ(out, 4u);
  EXPECT_EQ(trace.evaluation_order, (std::vector<std::uint64_t>{4, 3, 2, 1, 0}));
}

TEST(OnlineSim, CapOverflowThrowsLocalFailure) {
  const auto path = path_graph(5);
  const FixedRanks r{{4, 3, 2, 1, 0}};
  try {
    eval_local(path, 0, rules::MaxChain{}, r, 3);
    FAIL() << "expected LocalFailure";
  } catch (const LocalFailure& f) {
    EXPECT_GT(f.explored(), 3u);
  }
}

// Sequential greedy over edges sorted by rank; independent of the lazy
// recursion and of the line-graph adapter.
std::vector<EdgeId> greedy_by_sorting(const LocalGraph& g, const EdgeRanks& ranks) {
  std::vector<std::pair<Rank, EdgeId>> order;
  for (const auto& [u, v] : g.edges()) order.emplace_back(ranks(EdgeId(u, v)), EdgeId(u, v));
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<char> used(g.size(), 0);
  std::vector<EdgeId> out;
  for (const auto& [r, e] : order) {
    if (used[e.u] || used[e.v]) continue;
    used[e.u] = used[e.v] = 1;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Matching, TriangleMatchesOnlyTheLowestEdge) {
  const auto g = LocalGraph::from_edges(3, Edges{{0, 1}, {1, 2}, {0, 2}});
  const Seed s = Seed::from_u64(9);
  const EdgeRanks ranks(g, s, FullPseudorandom{});
  std::vector<EdgeId> edges = {EdgeId(0, 1), EdgeId(1, 2), EdgeId(0, 2)};
  const auto lowest = *std::min_element(edges.begin(), edges.end(),
                                        [&](const auto& a, const auto& b) { return ranks(a) < ranks(b); });
  for (const auto& e : edges) EXPECT_EQ(is_matched(g, e, ranks, 10).matched, e == lowest);
}

TEST(Matching, EdgeIdIsCanonical) {
  EXPECT_EQ(EdgeId(3, 1), EdgeId(1, 3));
  const auto g = path_graph(3);
  EXPECT_THROW(is_matched(g, EdgeId(0, 2), Seed::from_u64(1), FullPseudorandom{}, 10), InvalidArgument);
}

TEST(Matching, AgreesWithSortedGreedyOracle) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Seed seed = Seed::from_u64(200 + s);
    const auto g = gen_bounded_degree(derive_subseed(seed, "g"), 150, 5);
    const EdgeRanks ranks(g, seed, FullPseudorandom{});
    auto local = full_matching(g, seed, FullPseudorandom{}, g.edge_count());
    std::sort(local.begin(), local.end());
    EXPECT_EQ(local, greedy_by_sorting(g, ranks));
    EXPECT_TRUE(verify_maximal(g, local));
  }
}

TEST(Matching, KWiseOrderingAlsoAgrees) {
  const Seed seed = Seed::from_u64(300);
  const auto g = gen_bounded_degree(seed, 100, 4);
  const KWiseIndependent kind{8, kMersenne61};
  auto local = full_matching(g, seed, kind, g.edge_count());
  auto global = greedy_global_matching(g, seed, kind);
  std::sort(local.begin(), local.end());
  std::sort(global.begin(), global.end());
  EXPECT_EQ(local, global);
}

TEST(Matching, VerifyMaximalRejectsBadMatchings) {
  const auto path = path_graph(4);
  EXPECT_FALSE(verify_maximal(path, {}));
  EXPECT_FALSE(verify_maximal(path, {EdgeId(0, 1), EdgeId(1, 2)}));
  EXPECT_FALSE(verify_maximal(path, {EdgeId(0, 2)}));
  EXPECT_TRUE(verify_maximal(path, {EdgeId(1, 2)}));
  EXPECT_TRUE(verify_maximal(path, {EdgeId(0, 1), EdgeId(2, 3)}));
}

TEST(Matching, CapOverflowThrows) {
  const auto g = gen_bounded_degree(Seed::from_u64(10), 500, 5);
  const EdgeRanks ranks(g, Seed::from_u64(10), FullPseudorandom{});
  std::size_t failures = 0;
  for (const auto& [u, v] : g.edges()) {
    try {
      is_matched(g, EdgeId(u, v), ranks, 1);
    } catch (const LocalFailure&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0u);
}

TEST(Matching, TrialReportsNoMismatches) {
  const Seed seed = Seed::from_u64(11);
  const auto g = gen_bounded_degree(seed, 1000, 5);
  const auto run = matching_trial(g, seed, FullPseudorandom{}, g.edge_count());
  EXPECT_FALSE(run.failed);
  EXPECT_EQ(run.mismatches, 0u);
  EXPECT_TRUE(run.maximal);
}

}  // namespace
}  // namespace lca
