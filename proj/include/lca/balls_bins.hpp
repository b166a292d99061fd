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

// Local simulation of power-of-d-choices allocation: a ball's bin is found
// by replaying the online rule over the balls it transitively depends on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lca/error.hpp"
#include "lca/graph.hpp"
#include "lca/parallel.hpp"
#include "lca/rank_oracle.hpp"
#include "lca/relevant_set.hpp"

namespace lca {

enum class DecisionRule {
  LeastLoaded,       // ties -> lowest bin id
  AlwaysGoLeft,      // ties -> leftmost group, then lowest bin id
  CapacityWeighted,  // least load / capacity; ties -> lowest bin id
  CircleNearest,     // least loaded of the nearest-point bins; ties -> lowest bin id
};

inline std::string_view to_string(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::LeastLoaded: return "least-loaded";
    case DecisionRule::AlwaysGoLeft: return "always-go-left";
    case DecisionRule::CapacityWeighted: return "capacity-weighted";
    case DecisionRule::CircleNearest: return "circle-nearest";
  }
  return "?";
}

inline DecisionRule parse_rule(std::string_view s) {
  for (auto r : {DecisionRule::LeastLoaded, DecisionRule::AlwaysGoLeft, DecisionRule::CapacityWeighted,
                 DecisionRule::CircleNearest}) {
    if (s == to_string(r)) return r;
  }
  throw InvalidArgument("unknown decision rule '" + std::string(s) + "'");
}

struct Assignment {
  std::uint32_t ball = 0;
  std::uint32_t bin = 0;
  bool failed = false;
  std::uint64_t probes = 0;
};

struct LoadProfile {
  std::vector<std::uint64_t> loads;
  std::uint64_t max_load = 0;
};

// Picks among the ball's choices using only their current loads and static
// bin metadata.
template <typename LoadOf>
std::uint32_t choose_bin(DecisionRule rule, const BipartiteChoices& bc, std::span<const std::uint32_t> choices,
                         LoadOf&& load_of) {
  std::uint32_t best = choices[0];
  auto better = [&](std::uint32_t a, std::uint32_t b) {  // is a strictly preferred to b
    const std::uint64_t la = load_of(a), lb = load_of(b);
    switch (rule) {
      case DecisionRule::CapacityWeighted: {
        const auto lhs = static_cast<__uint128_t>(la) * bc.capacity(b);
        const auto rhs = static_cast<__uint128_t>(lb) * bc.capacity(a);
        if (lhs != rhs) return lhs < rhs;
        return a < b;
      }
      case DecisionRule::AlwaysGoLeft: {
        if (la != lb) return la < lb;
        if (!bc.groups().empty() && bc.groups()[a] != bc.groups()[b]) return bc.groups()[a] < bc.groups()[b];
        return a < b;
      }
      case DecisionRule::LeastLoaded:
      case DecisionRule::CircleNearest:
        break;
    }
    if (la != lb) return la < lb;
    return a < b;
  };
  for (std::size_t i = 1; i < choices.size(); ++i) {
    if (better(choices[i], best)) best = choices[i];
  }
  return best;
}

// Ball ranks for an allocation run.
inline RankOracle ball_ranks(const BipartiteChoices& bc, const Seed& seed, const OrderingKind& kind) {
  return RankOracle(derive_subseed(seed, "ball-ranks"), kind, std::max<std::size_t>(bc.n_balls(), 1));
}

// K = ceil(C * log2 m), at least 1.
inline std::size_t default_cap(std::size_t m_bins, double cap_constant) {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(m_bins, 2)));
  return static_cast<std::size_t>(std::max(1.0, std::ceil(cap_constant * lg)));
}

// On truncation (or cap == 0) the query fails and the ball gets a
// seed-derived uniform choice among its own bins.
inline Assignment assign_query(const BipartiteChoices& bc, std::uint32_t ball, DecisionRule rule, const Seed& seed,
                               const RankOracle& ranks, std::size_t cap) {
  LCA_REQUIRE(ball < bc.n_balls(), "assign_query: ball out of range");
  Assignment out;
  out.ball = ball;
  auto fail = [&] {
    const auto own = bc.choices_of(ball);
    out.failed = true;
    out.bin = own[random_in_range(seed, "fallback/" + std::to_string(ball), own.size())];
    return out;
  };
  if (cap == 0) return fail();
  const auto rs = explore_bipartite(bc, ball, ranks, cap);
  out.probes = rs.probes;
  if (rs.truncated) return fail();

  std::unordered_map<std::uint32_t, std::uint64_t> loads;
  auto load_of = [&](std::uint32_t bin) {
    auto it = loads.find(bin);
    return it == loads.end() ? std::uint64_t{0} : it->second;
  };
  for (const auto& [id, r] : rs.members) {
    const auto b = static_cast<std::uint32_t>(id);
    ++out.probes;
    const auto bin = choose_bin(rule, bc, bc.choices_of(b), load_of);
    ++loads[bin];
    if (b == ball) out.bin = bin;
  }
  return out;
}

inline Assignment assign_query(const BipartiteChoices& bc, std::uint32_t ball, DecisionRule rule, const Seed& seed,
                               const OrderingKind& kind, std::size_t cap) {
  return assign_query(bc, ball, rule, seed, ball_ranks(bc, seed, kind), cap);
}

inline LoadProfile profile_of(const BipartiteChoices& bc, const std::vector<Assignment>& assignments) {
  LoadProfile p;
  p.loads.assign(bc.m_bins(), 0);
  for (const auto& a : assignments) p.max_load = std::max(p.max_load, ++p.loads[a.bin]);
  return p;
}

inline std::pair<std::vector<Assignment>, LoadProfile> assign_all(const BipartiteChoices& bc, DecisionRule rule,
                                                                  const Seed& seed, const OrderingKind& kind,
                                                                  std::size_t cap, unsigned jobs = 1) {
  const auto ranks = ball_ranks(bc, seed, kind);
  std::vector<Assignment> out(bc.n_balls());
  parallel_for(bc.n_balls(), jobs, [&](std::size_t b) {
    out[b] = assign_query(bc, static_cast<std::uint32_t>(b), rule, seed, ranks, cap);
  });
  auto profile = profile_of(bc, out);
  return {std::move(out), std::move(profile)};
}

// The online algorithm itself: balls in rank order against true loads.
inline std::pair<std::vector<Assignment>, LoadProfile> run_global(const BipartiteChoices& bc, DecisionRule rule,
                                                                  const Seed& seed, const OrderingKind& kind) {
  const auto ranks = ball_ranks(bc, seed, kind);
  std::vector<std::pair<std::uint64_t, Rank>> order;
  order.reserve(bc.n_balls());
  for (std::uint32_t b = 0; b < bc.n_balls(); ++b) order.emplace_back(b, ranks(b));
  detail::sort_by_rank(order);
  std::vector<std::uint64_t> loads(bc.m_bins(), 0);
  std::vector<Assignment> out(bc.n_balls());
  for (const auto& [id, r] : order) {
    const auto b = static_cast<std::uint32_t>(id);
    const auto bin = choose_bin(rule, bc, bc.choices_of(b), [&](std::uint32_t u) { return loads[u]; });
    ++loads[bin];
    out[b] = Assignment{b, bin, false, 0};
  }
  auto profile = profile_of(bc, out);
  return {std::move(out), std::move(profile)};
}

struct MaxLoadSummary {
  std::size_t runs = 0;
  double mean = 0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::uint64_t p50 = 0;
  std::uint64_t p95 = 0;
};

// Nearest-rank percentiles over the per-run max loads.
inline MaxLoadSummary max_load_report(const std::vector<LoadProfile>& profiles) {
  LCA_REQUIRE(!profiles.empty(), "max_load_report: need at least one profile");
  std::vector<std::uint64_t> maxima;
  for (const auto& p : profiles) maxima.push_back(p.max_load);
  std::sort(maxima.begin(), maxima.end());
  MaxLoadSummary s;
  s.runs = maxima.size();
  s.min = maxima.front();
  s.max = maxima.back();
  double sum = 0;
  for (auto m : maxima) sum += static_cast<double>(m);
  s.mean = sum / static_cast<double>(maxima.size());
  auto pct = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(maxima.size())));
    return maxima[std::clamp<std::size_t>(rank, 1, maxima.size()) - 1];
  };
  s.p50 = pct(0.50);
  s.p95 = pct(0.95);
  return s;
}

// The choice-sampling scheme each rule expects.
inline ChoiceScheme scheme_for(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::AlwaysGoLeft: return ChoiceScheme::Groups;
    case DecisionRule::CapacityWeighted: return ChoiceScheme::Capacity;
    case DecisionRule::CircleNearest: return ChoiceScheme::Circle;
    case DecisionRule::LeastLoaded: break;
  }
  return ChoiceScheme::Uniform;
}

}  // namespace lca
