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

// Single-trial experiment drivers shared by the CLI and the acceptance
// runner. Each takes an explicit seed; trial t of a multi-trial run uses
// derive_subseed(seed, "trial", t).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lca/balls_bins.hpp"
#include "lca/error.hpp"
#include "lca/generators.hpp"
#include "lca/hypergraph_lca.hpp"
#include "lca/matching.hpp"
#include "lca/parallel.hpp"
#include "lca/relevant_set.hpp"
#include "lca/seed.hpp"

namespace lca {

inline Seed trial_seed(const Seed& seed, std::uint64_t t) { return derive_subseed(seed, "trial", t); }

struct LowerBoundResult {
  std::uint64_t path_len = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;  // trials whose relevant set was the whole path
  double frequency = 0;
  double expected = 0;     // 1 / path_len!
  double std_error = 0;    // of the frequency, under `expected`
};

inline double inverse_factorial(std::uint64_t k) {
  return std::exp(-std::lgamma(static_cast<double>(k) + 1.0));
}

// Explores from vertex 0 of a path with fresh ranks per trial.
inline LowerBoundResult lower_bound_experiment(std::uint64_t path_len, std::uint64_t trials, const Seed& seed,
                                               unsigned jobs = 1) {
  LCA_REQUIRE(path_len >= 2, "lower_bound_experiment: path_len must be >= 2");
  LCA_REQUIRE(trials >= 1, "lower_bound_experiment: trials must be >= 1");
  const LocalGraph path = path_graph(path_len);
  std::vector<char> full(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const RankOracle ranks(derive_subseed(trial_seed(seed, t), "ranks"), FullPseudorandom{}, path_len);
    full[t] = explore(path, 0, ranks, path_len).size() == path_len;
  });
  LowerBoundResult r;
  r.path_len = path_len;
  r.trials = trials;
  r.hits = static_cast<std::uint64_t>(std::count(full.begin(), full.end(), 1));
  r.frequency = static_cast<double>(r.hits) / static_cast<double>(trials);
  r.expected = inverse_factorial(path_len);
  r.std_error = std::sqrt(r.expected * (1 - r.expected) / static_cast<double>(trials));
  return r;
}

struct MatchingRun {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t matched = 0;
  std::size_t mismatches = 0;  // per-edge verdicts differing from the global greedy
  bool maximal = false;
  bool failed = false;
  std::string failure;
  std::uint64_t max_probes = 0;
};

// Queries every edge locally and compares with greedy over the line graph.
inline MatchingRun matching_trial(const LocalGraph& g, const Seed& seed, const OrderingKind& kind, std::size_t cap) {
  MatchingRun run;
  run.vertices = g.size();
  run.edges = g.edge_count();
  const EdgeRanks ranks(g, seed, kind);
  const auto global = greedy_global_matching(g, seed, kind);
  std::vector<char> in_global(g.edge_count(), 0);
  for (const auto& e : global) in_global[*g.find_edge(e.u, e.v)] = 1;
  std::vector<EdgeId> local;
  try {
    for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
      const auto [u, v] = g.endpoints(i);
      const auto verdict = is_matched(g, EdgeId(u, v), ranks, cap);
      run.max_probes = std::max(run.max_probes, verdict.probes);
      if (verdict.matched != (in_global[i] != 0)) ++run.mismatches;
      if (verdict.matched) local.emplace_back(u, v);
    }
  } catch (const LocalFailure& f) {
    run.failed = true;
    run.failure = f.what();
    return run;
  }
  run.matched = local.size();
  run.maximal = verify_maximal(g, local);
  return run;
}

struct BallsBinsRun {
  std::uint64_t balls = 0;
  std::uint64_t failures = 0;
  std::uint64_t mismatches = 0;  // non-failed queries whose bin differs from the online run
  std::uint64_t max_load = 0;
  std::uint64_t global_max_load = 0;
  std::uint64_t max_probes = 0;
  double mean_probes = 0;
  std::vector<Assignment> assignments;
};

inline BallsBinsRun balls_bins_trial(const BipartiteChoices& bc, DecisionRule rule, const Seed& seed,
                                     const OrderingKind& kind, std::size_t cap, unsigned jobs = 1) {
  auto [local, profile] = assign_all(bc, rule, seed, kind, cap, jobs);
  const auto [global, global_profile] = run_global(bc, rule, seed, kind);
  BallsBinsRun run;
  run.balls = bc.n_balls();
  run.max_load = profile.max_load;
  run.global_max_load = global_profile.max_load;
  double probe_sum = 0;
  for (std::size_t b = 0; b < local.size(); ++b) {
    const auto& a = local[b];
    run.max_probes = std::max(run.max_probes, a.probes);
    probe_sum += static_cast<double>(a.probes);
    if (a.failed) {
      ++run.failures;
    } else if (a.bin != global[b].bin) {
      ++run.mismatches;
    }
  }
  if (!local.empty()) run.mean_probes = probe_sum / static_cast<double>(local.size());
  run.assignments = std::move(local);
  return run;
}

struct PhasedRun {
  bool failed = false;
  std::string failure;
  bool valid = false;
  std::array<std::uint64_t, 4> phase_histogram{};
  std::uint64_t max_probes = 0;
  std::vector<bool> values;
};

// Solves every vertex (variable) and checks the result with the
// independent checker for the instance type.
template <typename Slot>
PhasedRun phased_trial(const SetSystem<Slot>& sys, const Seed& seed, const PhaseParams& params) {
  PhasedRun run;
  try {
    auto full = solve_all(sys, seed, params);
    run.phase_histogram = full.phase_histogram;
    run.max_probes = full.max_probes;
    run.values = std::move(full.values);
  } catch (const LocalFailure& f) {
    run.failed = true;
    run.failure = f.what();
    return run;
  }
  if constexpr (std::is_same_v<Slot, Literal>) {
    run.valid = evaluate_cnf(sys, run.values);
  } else {
    run.valid = verify_coloring(sys, run.values);
  }
  return run;
}

}  // namespace lca
