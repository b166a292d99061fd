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

// Acceptance suite: ten criteria, each reported as one PASS/FAIL line.
// Thresholds below were frozen from calibration runs of the oracles.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lca/balls_bins.hpp"
#include "lca/experiments.hpp"
#include "lca/generators.hpp"
#include "lca/hypergraph_lca.hpp"
#include "lca/matching.hpp"
#include "lca/online_sim.hpp"
#include "lca/rank_oracle.hpp"
#include "lca/relevant_set.hpp"

namespace lca::acceptance {

inline constexpr double kCapConstant = 6.0;        // balls-bins K = ceil(C log2 m)
inline constexpr double kTreeLogConstant = 100.0;  // max relevant set <= this * log2 n
inline constexpr double kProbeConstant = 2.0;      // coloring probes <= this * log2(n)^4
inline constexpr const char* kSuiteSeed = "a5a5a5a5a5a5a5a5000000000000000000000000000000000000000000000001";

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double budget_seconds = 0;
};

inline std::string line(const Criterion& c) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.detail << " (" << c.seconds << "s";
  if (c.budget_seconds > 0) os << ", budget " << c.budget_seconds << "s";
  os << ")";
  return os.str();
}

// Small graph number i of the micro corpus: 1..8 vertices, edge density
// cycling through 0.2 .. 1.0.
inline LocalGraph micro_graph(const Seed& corpus, std::size_t i) {
  const std::size_t n = 1 + i % 8;
  const double p = 0.2 * static_cast<double>(1 + (i / 8) % 5);
  SeedStream rng(derive_subseed(corpus, "graph", i));
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return LocalGraph::from_edges(n, edges);
}

struct Context {
  Seed seed;
  unsigned jobs = 1;
};

inline Criterion matching_equivalence(const Context& ctx) {
  Criterion c{1, "matching oracle equivalence", false, "", 0, 60};
  std::uint64_t mismatches = 0, failures = 0, non_maximal = 0, edges = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Seed ts = trial_seed(derive_subseed(ctx.seed, "matching"), s);
    const auto g = gen_bounded_degree(derive_subseed(ts, "instance"), 1000, 5);
    const auto run = matching_trial(g, ts, FullPseudorandom{}, g.edge_count());
    edges += run.edges;
    if (run.failed) {
      ++failures;
      continue;
    }
    mismatches += run.mismatches;
    non_maximal += !run.maximal;
  }
  c.pass = mismatches == 0 && non_maximal == 0;
  c.detail = "100 seeds, n=1000, d=5, " + std::to_string(edges) + " edges; mismatches=" + std::to_string(mismatches) +
             " non_maximal=" + std::to_string(non_maximal) + " failed_runs=" + std::to_string(failures);
  return c;
}

inline Criterion balls_bins_equivalence(const Context& ctx) {
  Criterion c{2, "balls-bins oracle equivalence", false, "", 0, 120};
  const std::size_t n = 10000, cap = default_cap(n, kCapConstant);
  std::uint64_t mismatches = 0, failures = 0, queries = 0;
  for (auto rule : {DecisionRule::LeastLoaded, DecisionRule::AlwaysGoLeft, DecisionRule::CapacityWeighted}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Seed ts = trial_seed(derive_subseed(ctx.seed, "balls-bins"), s);
      const auto bc = gen_bipartite_choices(derive_subseed(ts, "instance"), n, n, 2, {scheme_for(rule), {}});
      const auto run = balls_bins_trial(bc, rule, ts, FullPseudorandom{}, cap, ctx.jobs);
      mismatches += run.mismatches;
      failures += run.failures;
      queries += run.balls;
    }
  }
  const double rate = static_cast<double>(failures) / static_cast<double>(queries);
  c.pass = mismatches == 0 && rate < 1e-3;
  std::ostringstream os;
  os << "3 rules x 20 seeds, n=m=10^4, d=2, K=" << cap << "; mismatches=" << mismatches << " failure_rate=" << rate
     << " (< 0.001)";
  c.detail = os.str();
  return c;
}

inline Criterion micro_brute_force(const Context& ctx) {
  Criterion c{3, "micro-scale brute-force equivalence", false, "", 0, 0};
  const Seed corpus = derive_subseed(ctx.seed, "micro-corpus");
  constexpr std::size_t kGraphs = 500, kSeeds = 100;
  std::vector<std::uint64_t> mismatches(kGraphs), exceptions(kGraphs), checks(kGraphs);
  parallel_for(kGraphs, ctx.jobs, [&](std::size_t i) {
    const auto g = micro_graph(corpus, i);
    const LineGraphView lg(g);
    for (std::size_t s = 0; s < kSeeds; ++s) {
      const Seed ts = derive_subseed(corpus, "seed", i * kSeeds + s);
      try {
        const RankOracle vr(derive_subseed(ts, "vertex"), FullPseudorandom{}, std::max<std::size_t>(g.size(), 1));
        const auto chain = eval_global(g, rules::MaxChain{}, vr);
        for (VertexId v = 0; v < g.size(); ++v) {
          ++checks[i];
          if (eval_local(g, v, rules::MaxChain{}, vr, g.size()).first != chain.outputs.at(v)) ++mismatches[i];
        }
        const RankOracle er(derive_subseed(ts, "edge"), FullPseudorandom{}, std::max<std::size_t>(lg.size(), 1));
        const auto greedy = eval_global(lg, rules::Greedy{}, er);
        for (VertexId e = 0; e < lg.size(); ++e) {
          ++checks[i];
          if (eval_local(lg, e, rules::Greedy{}, er, lg.size()).first != greedy.outputs.at(e)) ++mismatches[i];
        }
      } catch (const std::exception&) {
        ++exceptions[i];
      }
    }
  });
  std::uint64_t mm = 0, ex = 0, total = 0;
  for (std::size_t i = 0; i < kGraphs; ++i) {
    mm += mismatches[i];
    ex += exceptions[i];
    total += checks[i];
  }
  c.pass = mm == 0 && ex == 0;
  c.detail = "500 graphs x 100 seeds, " + std::to_string(total) + " vertex/edge checks; mismatches=" +
             std::to_string(mm) + " exceptions=" + std::to_string(ex);
  return c;
}

inline Criterion tree_scaling(const Context& ctx) {
  Criterion c{4, "query-tree scaling", false, "", 0, 300};
  std::ostringstream os;
  os.precision(3);
  bool pass = true;
  for (auto model : {GraphModel::BoundedDegree, GraphModel::Binomial}) {
    double lo = 1e300, hi = 0, worst_ratio = 0;
    for (int e : {10, 12, 14, 16}) {
      TreeExperiment x;
      x.model = model;
      x.n = std::size_t{1} << e;
      x.d = 5;
      x.trials = 10000;
      x.instances = 100;
      x.jobs = ctx.jobs;
      const auto s = tree_stats(derive_subseed(ctx.seed, "tree-scaling", static_cast<std::uint64_t>(e)), x);
      lo = std::min(lo, s.mean_size);
      hi = std::max(hi, s.mean_size);
      worst_ratio = std::max(worst_ratio, static_cast<double>(s.max_size) / e);
    }
    const bool ok = hi < 2 * lo && worst_ratio <= kTreeLogConstant;
    pass = pass && ok;
    os << (model == GraphModel::Binomial ? "binomial" : "bounded") << ": mean " << lo << ".." << hi
       << ", max/log2n <= " << worst_ratio << "; ";
  }
  c.pass = pass;
  c.detail = os.str() + "limits: mean spread < 2x, max/log2n <= " + std::to_string(static_cast<int>(kTreeLogConstant));
  return c;
}

inline Criterion subcritical_tail(const Context& ctx) {
  Criterion c{5, "subcritical GW tail", false, "", 0, 30};
  std::ostringstream os;
  os.precision(4);
  bool pass = true;
  const double expected = 1.0 / (1.0 - 3.0 / 9.0);
  const std::vector<OffspringLaw> laws = {RegularOffspring{3, 9.0}, BinomialOffspring{10000, 3.0 / (10000 * 9.0)}};
  const char* names[] = {"regular(3,9)", "binomial(10^4,3/(nL))"};
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto s = gw_stats(derive_subseed(ctx.seed, "gw", i), laws[i], 100000, std::uint64_t{1} << 40, {}, ctx.jobs);
    const double rel = std::abs(s.mean_size - expected) / expected;
    double slope = 0;
    bool slope_ok = true;
    try {
      slope = log_tail_slope(s, 5, 30);
    } catch (const InvalidArgument&) {
      slope_ok = false;
    }
    const bool ok = rel < 0.05 && slope_ok && slope <= -0.1;
    pass = pass && ok;
    os << names[i] << ": mean " << s.mean_size << " (expect " << expected << "), slope " << slope << "; ";
  }
  c.pass = pass;
  c.detail = os.str() + "limits: 5% and slope <= -0.1";
  return c;
}

inline Criterion lower_bound(const Context& ctx) {
  Criterion c{6, "path lower bound", false, "", 0, 60};
  std::ostringstream os;
  os.precision(5);
  bool pass = true;
  for (auto [k, trials] : {std::pair<std::uint64_t, std::uint64_t>{2, 100000}, {5, 1000000}}) {
    const auto r = lower_bound_experiment(k, trials, derive_subseed(ctx.seed, "lower-bound", k), ctx.jobs);
    const double z = (r.frequency - r.expected) / r.std_error;
    pass = pass && std::abs(z) <= 3;
    os << "k=" << k << ": " << r.frequency << " vs " << r.expected << " (z=" << z << "); ";
  }
  c.pass = pass;
  c.detail = os.str() + "limit |z| <= 3";
  return c;
}

inline Criterion phased_validity(const Context& ctx) {
  Criterion c{7, "hypergraph coloring and k-CNF validity", false, "", 0, 0};
  std::ostringstream os;
  os.precision(3);
  bool pass = true;
  for (int sat = 0; sat < 2; ++sat) {
    std::uint64_t runs = 0, failures = 0, invalid = 0;
    double worst_c = 0;
    for (std::size_t n : {40, 80, 160}) {
      const double log4 = std::pow(std::log2(static_cast<double>(n)), 4);
      for (std::uint64_t s = 0; s < 50; ++s) {
        const Seed ts = trial_seed(derive_subseed(ctx.seed, sat ? "ksat" : "coloring", n), s);
        const Seed inst = derive_subseed(ts, "instance");
        PhasedRun run;
        if (sat) {
          run = phased_trial(gen_cnf(inst, 20 * n, n, 40, 2), ts, PhaseParams{});
        } else {
          run = phased_trial(gen_hypergraph(inst, 20 * n, n, 40, 2), ts, PhaseParams{});
        }
        ++runs;
        failures += run.failed;
        invalid += !run.failed && !run.valid;
        if (!run.failed) worst_c = std::max(worst_c, static_cast<double>(run.max_probes) / log4);
      }
    }
    const double rate = static_cast<double>(failures) / static_cast<double>(runs);
    pass = pass && invalid == 0 && rate < 0.01 && worst_c <= kProbeConstant;
    os << (sat ? "k-CNF" : "coloring") << ": invalid=" << invalid << " failure_rate=" << rate
       << " max probes/log2(n)^4=" << worst_c << "; ";
  }
  c.pass = pass;
  c.detail = "k=40, d=2, n in {40,80,160}, m=20n, 50 seeds each; " + os.str() + "limit c <= 2";
  return c;
}

// Queries a random subset in two shuffled orders; answers must agree with
// each other and with the full solution.
inline Criterion consistency(const Context& ctx) {
  Criterion c{8, "consistency and query obliviousness", false, "", 0, 0};
  std::map<std::string, std::uint64_t> violations;
  const Seed base = derive_subseed(ctx.seed, "consistency");
  auto orders = [](const Seed& s, std::size_t universe, std::size_t count) {
    std::vector<std::uint32_t> ids(universe);
    for (std::uint32_t i = 0; i < universe; ++i) ids[i] = i;
    SeedStream pick(derive_subseed(s, "subset"));
    shuffle(ids, pick);
    ids.resize(std::min(count, universe));
    auto a = ids, b = ids;
    SeedStream ra(derive_subseed(s, "order-a")), rb(derive_subseed(s, "order-b"));
    shuffle(a, ra);
    shuffle(b, rb);
    return std::pair{a, b};
  };
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Seed ts = trial_seed(base, s);
    {
      const auto g = gen_bounded_degree(derive_subseed(ts, "matching"), 300, 5);
      const EdgeRanks ranks(g, ts, FullPseudorandom{});
      const auto full = full_matching(g, ts, FullPseudorandom{}, g.edge_count());
      std::vector<char> in_full(g.edge_count(), 0);
      for (const auto& e : full) in_full[*g.find_edge(e.u, e.v)] = 1;
      const auto [a, b] = orders(ts, g.edge_count(), 100);
      std::map<std::uint32_t, bool> first;
      for (auto e : a) {
        const auto [u, v] = g.endpoints(e);
        first[e] = is_matched(g, EdgeId(u, v), ranks, g.edge_count()).matched;
      }
      for (auto e : b) {
        const auto [u, v] = g.endpoints(e);
        const bool m = is_matched(g, EdgeId(u, v), ranks, g.edge_count()).matched;
        violations["matching"] += (m != first[e]) + (m != (in_full[e] != 0));
      }
    }
    {
      const auto bc = gen_bipartite_choices(derive_subseed(ts, "balls"), 2000, 2000, 2, {});
      const std::size_t cap = default_cap(2000, kCapConstant);
      const auto [full, profile] = assign_all(bc, DecisionRule::LeastLoaded, ts, FullPseudorandom{}, cap);
      const auto ranks = ball_ranks(bc, ts, FullPseudorandom{});
      const auto [a, b] = orders(ts, bc.n_balls(), 200);
      std::map<std::uint32_t, std::uint32_t> first;
      for (auto x : a) first[x] = assign_query(bc, x, DecisionRule::LeastLoaded, ts, ranks, cap).bin;
      for (auto x : b) {
        const auto bin = assign_query(bc, x, DecisionRule::LeastLoaded, ts, ranks, cap).bin;
        violations["balls-bins"] += (bin != first[x]) + (bin != full[x].bin);
      }
    }
    auto phased = [&](const auto& sys, const char* name) {
      using Slot = typename std::decay_t<decltype(sys)>::slot_type;
      const PhasedLca<Slot> lca(sys, ts, PhaseParams{});
      std::optional<FullAssignment> full;
      try {
        full = solve_all(sys, ts, PhaseParams{});
      } catch (const LocalFailure&) {
      }
      auto answer = [&](std::uint32_t v) -> int {
        try {
          return lca.query(v).value ? 1 : 0;
        } catch (const LocalFailure&) {
          return -1;
        }
      };
      const auto [a, b] = orders(ts, sys.vertex_count(), 100);
      std::map<std::uint32_t, int> first;
      for (auto v : a) first[v] = answer(v);
      for (auto v : b) {
        const int x = answer(v);
        violations[name] += (x != first[v]) + (full && x != (full->values[v] ? 1 : 0));
      }
    };
    phased(gen_hypergraph(derive_subseed(ts, "hypergraph"), 800, 40, 40, 2), "coloring");
    phased(gen_cnf(derive_subseed(ts, "cnf"), 800, 40, 40, 2), "k-CNF");
  }
  std::uint64_t total = 0;
  std::string detail = "20 seeds per LCA; violations:";
  for (const auto& [name, v] : violations) {
    total += v;
    detail += " " + name + "=" + std::to_string(v);
  }
  c.pass = total == 0;
  c.detail = detail;
  return c;
}

inline Criterion kwise_exactness(const Context&) {
  Criterion c{9, "k-wise ordering exactness", false, "", 0, 10};
  constexpr std::uint64_t p = 31, n = 8;
  std::map<std::array<int, 3>, std::uint64_t> counts;
  std::uint64_t subsets = 0;
  double worst = 0;
  std::vector<std::array<std::uint64_t, 3>> triples;
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = a + 1; b < n; ++b)
      for (std::uint64_t x = b + 1; x < n; ++x) triples.push_back({a, b, x});
  for (const auto& t : triples) {
    std::array<std::uint64_t, 6> per_order{};
    std::uint64_t total = 0;
    for (std::uint64_t c0 = 0; c0 < p; ++c0)
      for (std::uint64_t c1 = 0; c1 < p; ++c1)
        for (std::uint64_t c2 = 0; c2 < p; ++c2) {
          const KWisePolynomial poly({c0, c1, c2}, p);
          std::array<std::pair<Rank, int>, 3> r;
          for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(i)] = {Rank{poly.scaled(t[static_cast<std::size_t>(i)]), t[static_cast<std::size_t>(i)]}, i};
          std::sort(r.begin(), r.end());
          // Index of the permutation (r[0].second, r[1].second, r[2].second).
          const int idx = r[0].second * 2 + (r[1].second > r[2].second ? 1 : 0);
          ++per_order[static_cast<std::size_t>(idx)];
          ++total;
        }
    ++subsets;
    for (auto cnt : per_order) {
      worst = std::max(worst, std::abs(static_cast<double>(cnt) / static_cast<double>(total) - 1.0 / 6.0));
    }
  }
  c.pass = worst <= 0.05;
  std::ostringstream os;
  os << subsets << " triples x 31^3 polynomials; max |freq - 1/6| = " << worst << " (<= 0.05)";
  c.detail = os.str();
  return c;
}

inline Criterion load_sanity(const Context& ctx) {
  Criterion c{10, "load-bound sanity", false, "", 0, 0};
  const std::size_t n = 10000;
  const auto bound = static_cast<std::uint64_t>(std::ceil(std::log2(std::log2(static_cast<double>(n))))) + 4;
  std::vector<LoadProfile> greedy, left;
  std::uint64_t within = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Seed ts = trial_seed(derive_subseed(ctx.seed, "loads"), s);
    const auto g = run_global(gen_bipartite_choices(derive_subseed(ts, "instance"), n, n, 2, {}),
                              DecisionRule::LeastLoaded, ts, FullPseudorandom{});
    const auto l = run_global(
        gen_bipartite_choices(derive_subseed(ts, "instance"), n, n, 2, {ChoiceScheme::Groups, {}}),
        DecisionRule::AlwaysGoLeft, ts, FullPseudorandom{});
    within += g.second.max_load <= bound;
    greedy.push_back(g.second);
    left.push_back(l.second);
  }
  const auto gs = max_load_report(greedy), ls = max_load_report(left);
  c.pass = within * 100 >= 95 * 50 && ls.mean <= gs.mean;
  std::ostringstream os;
  os.precision(3);
  os << "50 seeds, n=m=10^4; greedy[2] max load <= " << bound << " in " << within << "/50 (>= 95%); mean max load "
     << "always-go-left " << ls.mean << " vs greedy " << gs.mean;
  c.detail = os.str();
  return c;
}

inline std::vector<std::function<Criterion(const Context&)>> all_criteria() {
  return {matching_equivalence, balls_bins_equivalence, micro_brute_force, tree_scaling, subcritical_tail,
          lower_bound,          phased_validity,        consistency,       kwise_exactness, load_sanity};
}

// Runs every criterion, printing each line as it completes. Criteria with
// a runtime budget also fail when they exceed it.
inline std::vector<Criterion> run_all(std::ostream& out, unsigned jobs = 1) {
  const Context ctx{Seed::from_hex(kSuiteSeed), jobs};
  std::vector<Criterion> results;
  for (const auto& criterion : all_criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c = criterion(ctx);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && c.seconds >= c.budget_seconds) {
      c.pass = false;
      c.detail += "; over runtime budget";
    }
    out << line(c) << std::endl;
    results.push_back(std::move(c));
  }
  return results;
}

}  // namespace lca::acceptance
