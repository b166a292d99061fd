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
#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "lca/experiments.hpp"
#include "lca/generators.hpp"
#include "lca/hypergraph_lca.hpp"

namespace lca {
namespace {

using Sets = std::vector<std::vector<VertexId>>;

TEST(Thresholds, FortyTwo) {
  const auto t = compute_thresholds(40, 2);
  EXPECT_EQ(t.delta, 7);  // ceil(log2 96)
  EXPECT_EQ(t.k, (std::array<int, 4>{40, 33, 26, 19}));
  EXPECT_TRUE(t.premise_holds);
}

TEST(Thresholds, TwentyTwoFailsStrictly) {
  EXPECT_THROW(compute_thresholds(20, 2), InvalidArgument);
  const auto t = compute_thresholds(20, 2, false);
  EXPECT_FALSE(t.premise_holds);
  EXPECT_EQ(t.raw[3], -1);
  EXPECT_EQ(t.k[3], 1);
}

TEST(Thresholds, PremiseBoundary) {
  // d = 2: k_4 = k - 21 and e * 3 = 8.15; 2^4 passes, 2^3 does not.
  EXPECT_NO_THROW(compute_thresholds(26, 2));
  EXPECT_THROW(compute_thresholds(25, 2), InvalidArgument);
}

TEST(Thresholds, LargerDegrees) {
  // d = 3: 16 * 3 * 8 * 4 = 1536 -> 11.
  EXPECT_EQ(threshold_delta(3), 11);
  // d = 5: 16 * 5 * 64 * 6 = 30720 -> 15.
  EXPECT_EQ(threshold_delta(5), 15);
  // Small d drops the (d-1)^3 factor: d = 1 -> 16 * 1 * 2 = 32 -> 5; d = 0 behaves like d = 1.
  EXPECT_EQ(threshold_delta(1), 5);
  EXPECT_EQ(threshold_delta(0), 5);
  EXPECT_EQ(threshold_delta(4), ceil_log2(16 * 4 * 27 * 5));
}

TEST(Thresholds, RejectsTinyK) { EXPECT_THROW(compute_thresholds(1, 2), InvalidArgument); }

TEST(Limits, FlooredAtOne) {
  const auto l = phase_limits(2, 1, 19);
  EXPECT_EQ(l.log_n, 1u);
  EXPECT_EQ(l.loglog_n, 1u);
  EXPECT_EQ(l.phase3_component, 1u);
  const auto big = phase_limits(160, 2, 19);
  EXPECT_EQ(big.log_n, 8u);
  EXPECT_EQ(big.loglog_n, 3u);
  EXPECT_EQ(big.phase1_component, 4u * 8 * 8);
  EXPECT_EQ(big.phase2_component, 2u * 8 * 3);
}

TEST(VerifyColoring, SmallCases) {
  const Hypergraph h(3, Sets{{0, 1}, {1, 2}});
  EXPECT_FALSE(verify_coloring(h, std::vector<bool>{false, false, false}));
  EXPECT_TRUE(verify_coloring(h, std::vector<bool>{false, true, false}));
  EXPECT_TRUE(verify_coloring(Hypergraph(2, Sets{{0, 1}}), std::vector<Color>{Color::Red, Color::Blue}));
  EXPECT_THROW(verify_coloring(h, std::vector<bool>{true}), InvalidArgument);
}

TEST(VerifyColoring, RandomColoringsFailAtTheUnionRate) {
  // A uniformly colored k-edge is monochromatic with probability 2^(1-k).
  constexpr int k = 10, edges = 200000;
  SeedStream rng(Seed::from_u64(1));
  int mono = 0;
  for (int e = 0; e < edges; ++e) {
    const auto bits = rng() & ((1u << k) - 1);
    mono += bits == 0 || bits == (1u << k) - 1;
  }
  const double p = std::ldexp(1.0, 1 - k);
  EXPECT_NEAR(mono, p * edges, 4 * std::sqrt(p * edges));
}

TEST(EvaluateCnf, Basics) {
  const CnfFormula f(2, std::vector<std::vector<Literal>>{{{0, false}, {1, true}}});
  EXPECT_TRUE(evaluate_cnf(f, {true, true}));
  EXPECT_TRUE(evaluate_cnf(f, {false, false}));
  EXPECT_FALSE(evaluate_cnf(f, {false, true}));
}

TEST(ColorQuery, EdgelessVertexGetsADeterministicColor) {
  const Hypergraph h(1, Sets{});
  const auto a = color_query(h, 0, Seed::from_u64(3), {});
  EXPECT_EQ(a.phase_resolved, 1);
  EXPECT_EQ(color_query(h, 0, Seed::from_u64(3), {}).color, a.color);
  EXPECT_EQ(color_all(h, Seed::from_u64(3), {}).values.size(), 1u);
}

TEST(ColorQuery, SingleEdgeRequeryIsStable) {
  const Hypergraph h(4, Sets{{0, 1, 2, 3}});
  const PhaseParams lenient{std::nullopt, false, FullPseudorandom{}};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Seed seed = Seed::from_u64(s);
    for (VertexId v = 0; v < 4; ++v) EXPECT_EQ(color_query(h, v, seed, lenient).color, color_query(h, v, seed, lenient).color);
    const auto run = phased_trial(h, seed, lenient);
    if (!run.failed) EXPECT_TRUE(run.valid);
  }
}

TEST(ColorQuery, OutOfRangeVertex) {
  const Hypergraph h(4, Sets{{0, 1, 2, 3}});
  EXPECT_THROW(color_query(h, 4, Seed::from_u64(1), PhaseParams{std::nullopt, false, FullPseudorandom{}}),
               InvalidArgument);
}

TEST(ColorQuery, StrictModeRejectsPremiseViolations) {
  const auto h = gen_hypergraph(Seed::from_u64(2), 200, 20, 20, 2);
  EXPECT_THROW(color_all(h, Seed::from_u64(2), PhaseParams{std::uint64_t{2}, true, FullPseudorandom{}}),
               InvalidArgument);
}

struct Config {
  std::size_t m, n, k;
  std::optional<std::uint64_t> d;
};

// Lenient configurations in which sets turn dangerous often enough to reach
// the later phases.
const Config kLenient[] = {{160, 20, 16, 1}, {60, 20, 6, std::nullopt}, {120, 30, 8, 0}};

PhaseParams lenient(const Config& c) { return {c.d, false, FullPseudorandom{}}; }

TEST(Phase1, LocalStatusesMatchTheSequentialRun) {
  for (const auto& c : kLenient) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Seed seed = Seed::from_u64(1000 + s);
      const auto h = gen_hypergraph(seed, c.m, c.n, c.k, 2);
      const PhasedLca<VertexId> lca(h, seed, lenient(c));
      const auto global = phase1_global(h, lca);
      for (VertexId v = 0; v < h.vertex_count(); ++v) {
        const auto local = lca.phase1_status(v);
        if (global.status[v] == kUnset) {
          EXPECT_FALSE(local.has_value()) << "vertex " << v;
        } else {
          ASSERT_TRUE(local.has_value()) << "vertex " << v;
          EXPECT_EQ(*local, global.status[v] == 1);
        }
      }
    }
  }
}

TEST(Phase1, DangerousSetsKeepExactlyTheirSavedVertices) {
  std::size_t events = 0;
  for (const auto& c : kLenient) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Seed seed = Seed::from_u64(2000 + s);
      const auto h = gen_hypergraph(seed, c.m, c.n, c.k, 2);
      const PhasedLca<VertexId> lca(h, seed, lenient(c));
      const auto run = phase1_global(h, lca);
      const int k2 = lca.thresholds().at(2);
      for (const auto& [e, uncolored] : run.dangerous_events) {
        ++events;
        EXPECT_EQ(uncolored, k2);
        int saved = 0;
        bool red = false, blue = false;
        for (auto v : h.members(e)) {
          if (run.status[v] == kUnset) {
            ++saved;
          } else {
            (run.status[v] ? blue : red) = true;
          }
        }
        EXPECT_EQ(saved, k2);
        EXPECT_FALSE(red && blue);
      }
    }
  }
  EXPECT_GT(events, 0u);
}

TEST(Phases, LaterPhasesNeverRecolor) {
  std::array<std::uint64_t, 4> seen{};
  for (const auto& c : kLenient) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Seed seed = Seed::from_u64(3000 + s);
      const auto h = gen_hypergraph(seed, c.m, c.n, c.k, 2);
      const PhasedLca<VertexId> lca(h, seed, lenient(c));
      for (VertexId v = 0; v < h.vertex_count(); ++v) {
        const auto first = lca.phase1_status(v);
        try {
          const auto a = lca.query(v);
          ASSERT_GE(a.phase_resolved, 1);
          ASSERT_LE(a.phase_resolved, 4);
          ++seen[static_cast<std::size_t>(a.phase_resolved - 1)];
          if (first) {
            EXPECT_EQ(a.phase_resolved, 1);
            EXPECT_EQ(a.value, *first);
          } else {
            EXPECT_GE(a.phase_resolved, 2);
          }
        } catch (const LocalFailure&) {
          EXPECT_FALSE(first.has_value());
        }
      }
    }
  }
  EXPECT_GT(seen[1], 0u);
  EXPECT_GT(seen[3], 0u);
}

TEST(Phases, NonFailingRunsAreProperAndFailuresHappen) {
  std::size_t ok = 0, failed = 0;
  for (const auto& c : kLenient) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Seed seed = Seed::from_u64(4000 + s);
      const auto run = phased_trial(gen_hypergraph(seed, c.m, c.n, c.k, 2), seed, lenient(c));
      if (run.failed) {
        ++failed;
        EXPECT_FALSE(run.failure.empty());
      } else {
        ++ok;
        EXPECT_TRUE(run.valid);
      }
    }
  }
  EXPECT_GT(ok, 0u);
  EXPECT_GT(failed, 0u);
}

TEST(Phases, StrictInstancesColorProperly) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Seed seed = Seed::from_u64(5000 + s);
    const auto h = gen_hypergraph(seed, 800, 40, 40, 2);
    const auto full = color_all(h, seed, {});
    EXPECT_TRUE(verify_coloring(h, full.values));
    EXPECT_EQ(full.phase_histogram[0] + full.phase_histogram[1] + full.phase_histogram[2] + full.phase_histogram[3],
              800u);
  }
}

TEST(Phases, AnswersAreQueryOrderOblivious) {
  const Config c = kLenient[0];
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Seed seed = Seed::from_u64(6000 + s);
    const auto h = gen_hypergraph(seed, c.m, c.n, c.k, 2);
    FullAssignment full;
    try {
      full = color_all(h, seed, lenient(c));
    } catch (const LocalFailure&) {
      continue;
    }
    std::vector<VertexId> order(h.vertex_count());
    for (VertexId v = 0; v < order.size(); ++v) order[v] = v;
    SeedStream rng(seed);
    shuffle(order, rng);
    for (auto v : order) EXPECT_EQ(color_query(h, v, seed, lenient(c)).color == Color::Blue, full.values[v]);
  }
}

TEST(Phases, KWiseOrderingWorks) {
  const Seed seed = Seed::from_u64(7000);
  const auto h = gen_hypergraph(seed, 800, 40, 40, 2);
  const auto full = color_all(h, seed, PhaseParams{std::nullopt, true, KWiseIndependent{16, kMersenne61}});
  EXPECT_TRUE(verify_coloring(h, full.values));
}

TEST(Sat, SingleTwoLiteralClause) {
  const CnfFormula f(2, std::vector<std::vector<Literal>>{{{0, false}, {1, false}}});
  const PhaseParams p{std::nullopt, false, FullPseudorandom{}};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Seed seed = Seed::from_u64(s);
    const auto run = phased_trial(f, seed, p);
    if (!run.failed) EXPECT_TRUE(run.valid);
    EXPECT_EQ(sat_query(f, 0, seed, p).value, sat_query(f, 0, seed, p).value);
  }
}

TEST(Sat, GeneratedFormulasAreSatisfied) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Seed seed = Seed::from_u64(8000 + s);
    const auto f = gen_cnf(seed, 800, 40, 40, 2);
    EXPECT_TRUE(evaluate_cnf(f, sat_all(f, seed, {}).values));
  }
}

TEST(Sat, LenientPhasesMatchSequentialRun) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Seed seed = Seed::from_u64(9000 + s);
    const auto f = gen_cnf(seed, 60, 20, 6, 2);
    const PhasedLca<Literal> lca(f, seed, PhaseParams{std::nullopt, false, FullPseudorandom{}});
    const auto global = phase1_global(f, lca);
    for (VertexId v = 0; v < f.vertex_count(); ++v) {
      const auto local = lca.phase1_status(v);
      EXPECT_EQ(local.has_value(), global.status[v] != kUnset);
    }
    const auto run = phased_trial(f, seed, PhaseParams{std::nullopt, false, FullPseudorandom{}});
    if (!run.failed) EXPECT_TRUE(run.valid);
  }
}

}  // namespace
}  // namespace lca
