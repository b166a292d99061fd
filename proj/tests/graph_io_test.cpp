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
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "lca/generators.hpp"
#include "lca/graph.hpp"
#include "lca/io.hpp"

namespace lca {
namespace {

using Edges = std::vector<std::pair<VertexId, VertexId>>;

TEST(LocalGraph, NeighborsAreSortedAndEdgesCanonical) {
  const auto g = LocalGraph::from_edges(4, Edges{{2, 0}, {0, 1}, {3, 0}});
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.max_degree(), 3u);
  const auto nb = g.neighbors(0);
  EXPECT_EQ(std::vector<VertexId>(nb.begin(), nb.end()), (std::vector<VertexId>{1, 2, 3}));
  EXPECT_EQ(g.endpoints(0), (std::pair<VertexId, VertexId>{0, 1}));
  EXPECT_TRUE(g.find_edge(2, 0).has_value());
  EXPECT_FALSE(g.find_edge(1, 2).has_value());
  for (VertexId v = 0; v < 4; ++v) {
    for (auto e : g.incident_edges(v)) {
      const auto [a, b] = g.endpoints(e);
      EXPECT_TRUE(a == v || b == v);
    }
  }
}

TEST(LocalGraph, RejectsBadEdges) {
  EXPECT_THROW(LocalGraph::from_edges(3, Edges{{1, 1}}), InvalidArgument);
  EXPECT_THROW(LocalGraph::from_edges(3, Edges{{0, 1}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(LocalGraph::from_edges(3, Edges{{0, 3}}), InvalidArgument);
  EXPECT_THROW(LocalGraph::from_edges(3, Edges{}).neighbors(3), InvalidArgument);
}

TEST(SetSystem, ValidatesUniformityAndMembers) {
  using Sets = std::vector<std::vector<VertexId>>;
  EXPECT_THROW(Hypergraph(4, Sets{{0, 1}, {1, 2, 3}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(4, Sets{{0, 0}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(4, Sets{{0, 4}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(4, Sets{{}}), InvalidArgument);
  const Hypergraph h(5, Sets{{0, 1}, {1, 2}, {3, 4}});
  EXPECT_EQ(h.uniformity(), 2u);
  EXPECT_EQ(h.max_dependency_degree(), 1u);
  EXPECT_EQ(h.dependents(0), (std::vector<std::uint32_t>{1}));
  EXPECT_TRUE(h.dependents(2).empty());
}

TEST(Literal, Satisfaction) {
  EXPECT_TRUE((Literal{3, false}).satisfied_by(true));
  EXPECT_FALSE((Literal{3, false}).satisfied_by(false));
  EXPECT_TRUE((Literal{3, true}).satisfied_by(false));
}

TEST(BipartiteChoices, TransposeAndValidation) {
  const BipartiteChoices bc(3, 4, 2, {0, 1, 1, 2, 1, 3});
  const auto b1 = bc.balls_of(1);
  EXPECT_EQ(std::vector<std::uint32_t>(b1.begin(), b1.end()), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(bc.capacity(0), 1u);
  EXPECT_THROW(BipartiteChoices(2, 4, 2, {0, 1, 2}), InvalidArgument);
  EXPECT_THROW(BipartiteChoices(1, 4, 2, {0, 4}), InvalidArgument);
  EXPECT_THROW(BipartiteChoices(2, 2, 1, {0, 1}, {1, 2}), InvalidArgument);
}

TEST(Generators, BoundedDegreeRespectsTheBound) {
  const auto g = gen_bounded_degree(Seed::from_u64(1), 5000, 5);
  EXPECT_LE(g.max_degree(), 5u);
  const double mean = 2.0 * static_cast<double>(g.edge_count()) / 5000.0;
  EXPECT_GT(mean, 4.9);  // only loops and repeated pairs are dropped
  EXPECT_EQ(g.edges(), gen_bounded_degree(Seed::from_u64(1), 5000, 5).edges());
}

TEST(Generators, BinomialMeanDegree) {
  constexpr std::size_t n = 20000;
  const auto g = gen_binomial(Seed::from_u64(2), n, 5.0);
  // Edge count ~ B(n(n-1)/2, 5/n): mean 49997.5, sd ~ 223.6.
  const double expected = 5.0 / n * (n * (n - 1) / 2.0);
  EXPECT_NEAR(static_cast<double>(g.edge_count()), expected, 5 * std::sqrt(expected));
}

TEST(Generators, PathGraph) {
  const auto p = path_graph(4);
  EXPECT_EQ(p.edge_count(), 3u);
  EXPECT_EQ(p.degree(0), 1u);
  EXPECT_EQ(p.degree(1), 2u);
}

TEST(Generators, UniformChoicesAreDistinctAndSpread) {
  const auto bc = gen_bipartite_choices(Seed::from_u64(3), 20000, 10, 2, {});
  std::vector<int> hits(10);
  for (std::uint32_t b = 0; b < 20000; ++b) {
    const auto c = bc.choices_of(b);
    ASSERT_NE(c[0], c[1]);
    ++hits[c[0]];
    ++hits[c[1]];
  }
  // Each bin is chosen by a ball with probability 1/5: 4000 +- 3 * 57.
  for (int h : hits) EXPECT_NEAR(h, 4000, 200);
}

TEST(Generators, GroupChoicesTakeOneBinPerGroup) {
  const auto bc = gen_bipartite_choices(Seed::from_u64(4), 1000, 10, 2, {ChoiceScheme::Groups, {}});
  ASSERT_EQ(bc.groups().size(), 10u);
  for (std::uint32_t b = 0; b < 1000; ++b) {
    const auto c = bc.choices_of(b);
    EXPECT_EQ(bc.groups()[c[0]], 0u);
    EXPECT_EQ(bc.groups()[c[1]], 1u);
  }
}

TEST(Generators, CircleChoicesAreNearestBins) {
  const auto bc = gen_bipartite_choices(Seed::from_u64(5), 200, 50, 3, {ChoiceScheme::Circle, {}});
  ASSERT_EQ(bc.positions().size(), 50u);
  EXPECT_TRUE(std::is_sorted(bc.positions().begin(), bc.positions().end()));
  for (std::uint32_t b = 0; b < 200; ++b) {
    for (auto bin : bc.choices_of(b)) EXPECT_LT(bin, 50u);
  }
}

TEST(Generators, HypergraphShape) {
  const auto h = gen_hypergraph(Seed::from_u64(6), 800, 40, 40, 2);
  EXPECT_EQ(h.vertex_count(), 800u);
  EXPECT_EQ(h.set_count(), 40u);
  EXPECT_EQ(h.uniformity(), 40u);
  EXPECT_LE(h.max_dependency_degree(), 2u);
  std::size_t used = 0;
  for (VertexId v = 0; v < 800; ++v) used += !h.incident(v).empty();
  EXPECT_EQ(used, 800u);
}

TEST(Generators, CnfShapeAndBothPolarities) {
  const auto f = gen_cnf(Seed::from_u64(7), 400, 20, 40, 2);
  EXPECT_LE(f.max_dependency_degree(), 2u);
  std::size_t negated = 0, total = 0;
  for (const auto& clause : f.sets()) {
    for (const auto& lit : clause) {
      negated += lit.negated;
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(negated) / static_cast<double>(total), 0.5, 0.05);
}

TEST(Generators, ImpossibleLayoutsAreReported) {
  EXPECT_THROW(gen_hypergraph(Seed::from_u64(8), 1, 5, 3, 2), InvalidArgument);
  // 6 edges of 3 vertices sharing pairwise with at most 1 neighbour each over
  // only 3 vertices cannot be laid out.
  EXPECT_THROW(gen_hypergraph(Seed::from_u64(8), 3, 6, 3, 1), GenerationError);
}

TEST(Io, GraphRoundTrip) {
  const auto g = gen_bounded_degree(Seed::from_u64(9), 30, 3);
  std::stringstream ss;
  io::write_graph(ss, g);
  EXPECT_EQ(io::read_graph(ss).edges(), g.edges());
}

TEST(Io, HypergraphAndDimacsRoundTrip) {
  const auto h = gen_hypergraph(Seed::from_u64(10), 60, 6, 10, 2);
  std::stringstream hs;
  io::write_hypergraph(hs, h);
  EXPECT_EQ(io::read_hypergraph(hs).sets(), h.sets());
  const auto f = gen_cnf(Seed::from_u64(10), 60, 6, 10, 2);
  std::stringstream fs;
  io::write_dimacs(fs, f);
  const auto back = io::read_dimacs(fs);
  ASSERT_EQ(back.set_count(), f.set_count());
  for (std::size_t e = 0; e < f.set_count(); ++e) {
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(back.sets()[e][i].var, f.sets()[e][i].var);
      EXPECT_EQ(back.sets()[e][i].negated, f.sets()[e][i].negated);
    }
  }
}

TEST(Io, ChoicesRoundTrip) {
  const auto bc = gen_bipartite_choices(Seed::from_u64(11), 50, 20, 2, {});
  std::stringstream ss;
  io::write_choices(ss, bc);
  const auto back = io::read_choices(ss);
  for (std::uint32_t b = 0; b < 50; ++b) {
    const auto x = bc.choices_of(b), y = back.choices_of(b);
    EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  }
}

int parse_error_line(const std::string& text) {
  std::stringstream ss(text);
  try {
    io::read_graph(ss);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

TEST(Io, GraphErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("graph n=3\n0 1\n1 1\n"), 3);
  EXPECT_EQ(parse_error_line("# comment\ngraph n=3\n0 1\n\n1 0\n"), 5);
  EXPECT_EQ(parse_error_line("graph n=3\n0 x\n"), 2);
  EXPECT_EQ(parse_error_line("graph n=3\n0 3\n"), 2);
  EXPECT_EQ(parse_error_line("graf n=3\n"), 1);
  EXPECT_EQ(parse_error_line("graph n=2\n0 1\n"), -1);
}

TEST(Io, DimacsErrors) {
  auto fails = [](const std::string& text) {
    std::stringstream ss(text);
    try {
      io::read_dimacs(ss);
    } catch (const ParseError&) {
      return true;
    }
    return false;
  };
  EXPECT_FALSE(fails("c ok\np cnf 3 2\n1 -2 0\n2 3 0\n"));
  EXPECT_TRUE(fails("1 2 0\n"));
  EXPECT_TRUE(fails("p cnf 2 1\n1 3 0\n"));
  EXPECT_TRUE(fails("p cnf 2 1\n1 2\n"));
  EXPECT_TRUE(fails("p cnf 2 2\n1 2 0\n"));
}

}  // namespace
}  // namespace lca
