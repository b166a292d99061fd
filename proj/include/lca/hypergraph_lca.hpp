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

// Four-phase local algorithm for 2-coloring k-uniform hypergraphs with
// bounded dependency degree, and its k-CNF twin.
//
// Phase 1 simulates one sequential random coloring of all vertices in a
// random order, coloring a vertex unless one of its edges is already
// dangerous (all but k_2 vertices colored, one color). A query only
// evaluates the vertices its answer depends on. If the queried vertex ends
// up saved, the connected component of surviving edges around it is
// recolored in phases 2 and 3 (with retries until the leftover components
// are small) and phase 4 brute-forces whatever remains.
//
// Hypergraph edges and CNF clauses share one engine. A vertex value is a
// bool (blue / true). An edge is killed once it sees both colors; a clause
// is killed once one of its literals is true.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lca/error.hpp"
#include "lca/graph.hpp"
#include "lca/rank_oracle.hpp"
#include "lca/seed.hpp"

namespace lca {

enum class Color : std::uint8_t { Red = 0, Blue = 1 };

inline Color to_color(bool blue) noexcept { return blue ? Color::Blue : Color::Red; }

struct PhaseThresholds {
  std::array<int, 4> k{};  // k_1 .. k_4 (possibly clamped to 1 in lenient mode)
  std::array<int, 4> raw{};
  int delta = 0;
  bool premise_holds = false;

  int at(int phase) const { return k.at(static_cast<std::size_t>(phase - 1)); }
};

// ceil(log2(16 d (d-1)^3 (d+1))). For d <= 2 the (d-1)^3 factor is taken as
// 1 and d as max(d, 1) so small instances still get a finite decrement.
inline int threshold_delta(std::uint64_t d) {
  const std::uint64_t dd = std::max<std::uint64_t>(d, 1);
  const std::uint64_t cube = d <= 2 ? 1 : (dd - 1) * (dd - 1) * (dd - 1);
  const std::uint64_t value = 16 * dd * cube * (dd + 1);
  return static_cast<int>(std::bit_width(value - 1));  // exact ceil(log2(value)) for value >= 2
}

// k_1 = k, k_i = k_{i-1} - delta. The premise is k_4 >= 1 and
// 2^(k_4 - 1) >= e (d + 1). Strict mode throws when it fails; lenient mode
// records the failure and clamps every k_i to at least 1.
inline PhaseThresholds compute_thresholds(int k, std::uint64_t d, bool strict = true) {
  LCA_REQUIRE(k >= 2, "compute_thresholds: k must be >= 2");
  PhaseThresholds t;
  t.delta = threshold_delta(d);
  for (int i = 0; i < 4; ++i) t.raw[static_cast<std::size_t>(i)] = k - i * t.delta;
  const int k4 = t.raw[3];
  const bool positive = k4 >= 1;
  const bool lll = positive && std::ldexp(1.0, k4 - 1) >= std::numbers::e * static_cast<double>(d + 1);
  t.premise_holds = positive && lll;
  if (strict && !positive) {
    throw InvalidArgument("premise violated: k_4 = " + std::to_string(k4) + " < 1 (k=" + std::to_string(k) +
                          ", d=" + std::to_string(d) + ", delta=" + std::to_string(t.delta) + ")");
  }
  if (strict && !lll) {
    throw InvalidArgument("premise violated: 2^(k_4-1) >= e(d+1) fails for k_4 = " + std::to_string(k4) +
                          ", d = " + std::to_string(d));
  }
  for (int i = 0; i < 4; ++i) t.k[static_cast<std::size_t>(i)] = std::max(1, t.raw[static_cast<std::size_t>(i)]);
  return t;
}

struct PhaseParams {
  std::optional<std::uint64_t> d;  // dependency degree; measured from the instance when unset
  bool strict = true;
  OrderingKind ordering = FullPseudorandom{};
};

struct LocalAnswer {
  bool value = false;
  int phase_resolved = 1;
  std::uint64_t probes = 0;
};

struct ColoringAnswer {
  Color color = Color::Red;
  int phase_resolved = 1;
  std::uint64_t probes = 0;
};

// Size limits derived from the edge count n. Logs are base 2, rounded up,
// floored at 1.
struct PhaseLimits {
  std::uint64_t log_n = 1;
  std::uint64_t loglog_n = 1;
  std::uint64_t rounds = 1;             // recoloring attempts in phases 2 and 3
  std::uint64_t phase1_component = 1;   // 4 d^3 log n
  std::uint64_t phase2_component = 1;   // 2 d^3 log log n
  std::uint64_t phase3_component = 1;   // log log n / k_4
  std::uint64_t brute_force_trials = std::uint64_t{1} << 24;
};

inline std::uint64_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(x - 1));
}

inline PhaseLimits phase_limits(std::size_t n, std::uint64_t d, int k4) {
  PhaseLimits l;
  l.log_n = std::max<std::uint64_t>(1, ceil_log2(n));
  l.loglog_n = std::max<std::uint64_t>(1, ceil_log2(l.log_n));
  l.rounds = l.log_n;
  const std::uint64_t d3 = d * d * d;
  l.phase1_component = std::max<std::uint64_t>(1, 4 * d3 * l.log_n);
  l.phase2_component = std::max<std::uint64_t>(1, 2 * d3 * l.loglog_n);
  l.phase3_component = std::max<std::uint64_t>(1, l.loglog_n / static_cast<std::uint64_t>(std::max(k4, 1)));
  return l;
}

// Status of a vertex after a phase: -1 saved/uncolored, else 0 or 1.
using VertexValue = std::int8_t;
inline constexpr VertexValue kUnset = -1;

template <typename Slot>
class PhasedLca {
 public:
  using System = SetSystem<Slot>;
  static constexpr bool kSat = std::is_same_v<Slot, Literal>;

  PhasedLca(const System& system, const Seed& seed, const PhaseParams& params)
      : sys_(&system),
        order_(derive_subseed(seed, "phased/order"), params.ordering, std::max<std::size_t>(system.vertex_count(), 1)),
        seed_(seed) {
    d_ = params.d ? *params.d : static_cast<std::uint64_t>(system.max_dependency_degree());
    if (system.set_count() > 0) {
      thresholds_ = compute_thresholds(static_cast<int>(system.uniformity()), d_, params.strict);
      limits_ = phase_limits(system.set_count(), d_, thresholds_.at(4));
    }
    phase1_key_ = derive_subseed(seed, "phased/coins/1").digest(domain::kCoin);
  }

  const PhaseThresholds& thresholds() const noexcept { return thresholds_; }
  const PhaseLimits& limits() const noexcept { return limits_; }
  std::uint64_t dependency_degree() const noexcept { return d_; }
  Rank rank(VertexId v) const { return order_.rank_of(v); }
  bool phase1_coin(VertexId v) const noexcept { return keyed_hash(phase1_key_, v) & 1; }

  // Number of colored vertices at which a non-killed set becomes dangerous
  // in the given phase (1..3).
  int dangerous_at(int phase) const { return static_cast<int>(sys_->uniformity()) - thresholds_.at(phase + 1); }

  // Phase-1 outcome for x: its value, or nullopt if saved.
  std::optional<bool> phase1_status(VertexId x) const {
    LCA_REQUIRE(x < sys_->vertex_count(), "vertex out of range");
    Query q;
    const VertexId roots[] = {x};
    ensure_phase1(roots, q);
    const auto s = q.phase1.at(x);
    if (s == kUnset) return std::nullopt;
    return s == 1;
  }

  LocalAnswer query(VertexId x) const {
    LCA_REQUIRE(x < sys_->vertex_count(), "vertex out of range");
    Query q;
    const VertexId roots[] = {x};
    ensure_phase1(roots, q);
    if (q.phase1.at(x) != kUnset) return {q.phase1.at(x) == 1, 1, q.probes};

    // Survived component of x after phase 1.
    std::vector<std::uint32_t> component;
    std::unordered_set<std::uint32_t> in_component, visited;
    auto consider = [&](std::uint32_t e) {
      if (!visited.insert(e).second) return;
      ensure_phase1(vars_of(e, q), q);
      if (killed(state_of(e, q.phase1, q))) return;
      component.push_back(e);
      in_component.insert(e);
      if (component.size() > limits_.phase1_component) {
        throw LocalFailure("phase 1: survived component of vertex " + std::to_string(x) + " exceeds " +
                               std::to_string(limits_.phase1_component) + " edges",
                           q.probes, component.size());
      }
    };
    ++q.probes;
    for (auto e : sys_->incident(x)) consider(e);
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (auto v : vars_of(component[head], q)) {
        ++q.probes;
        for (auto f : sys_->incident(v)) consider(f);
      }
    }

    // Values of every vertex touched by the component, from phase 1.
    Values values;
    for (auto e : component) {
      for (auto v : vars_of(e, q)) values.emplace(v, q.phase1.at(v));
    }

    for (int phase = 2; phase <= 3; ++phase) {
      const auto uncolored = uncolored_by_rank(component, values, q);
      const std::uint64_t limit = phase == 2 ? limits_.phase2_component : limits_.phase3_component;
      bool good = false;
      Values trial;
      std::vector<std::vector<std::uint32_t>> pieces;
      for (std::uint64_t round = 0; round < limits_.rounds && !good; ++round) {
        trial = values;
        random_phase(phase, round, in_component, uncolored, trial, q);
        pieces = survived_components(component, in_component, trial, q);
        good = std::all_of(pieces.begin(), pieces.end(), [&](const auto& c) { return c.size() <= limit; });
      }
      if (!good) {
        throw LocalFailure("phase " + std::to_string(phase) + ": no good coloring of a " +
                               std::to_string(component.size()) + "-edge component in " +
                               std::to_string(limits_.rounds) + " rounds",
                           q.probes, component.size());
      }
      values = std::move(trial);
      if (values.at(x) != kUnset) return {values.at(x) == 1, phase, q.probes};
      component = piece_containing(x, pieces, q);
      in_component = std::unordered_set<std::uint32_t>(component.begin(), component.end());
    }

    return {brute_force(x, component, values, q), 4, q.probes};
  }

 private:
  using Values = std::unordered_map<VertexId, VertexValue>;

  struct Query {
    Values phase1;
    std::uint64_t probes = 0;
  };

  struct SetState {
    int assigned = 0;
    bool seen_true = false;
    bool seen_false = false;
  };

  static bool literal_value(const Slot& slot, bool value) noexcept {
    if constexpr (kSat) {
      return slot.satisfied_by(value);
    } else {
      return value;
    }
  }

  static bool killed(const SetState& s) noexcept {
    if constexpr (kSat) {
      return s.seen_true;
    } else {
      return s.seen_true && s.seen_false;
    }
  }

  static void add(SetState& s, const Slot& slot, bool value) noexcept {
    ++s.assigned;
    (literal_value(slot, value) ? s.seen_true : s.seen_false) = true;
  }

  bool dangerous(const SetState& s, int phase) const { return !killed(s) && s.assigned >= dangerous_at(phase); }

  std::vector<VertexId> vars_of(std::uint32_t e, Query& q) const {
    ++q.probes;
    std::vector<VertexId> out;
    for (const auto& slot : sys_->members(e)) out.push_back(var_of(slot));
    return out;
  }

  SetState state_of(std::uint32_t e, const Values& values, Query& q) const {
    ++q.probes;
    SetState s;
    for (const auto& slot : sys_->members(e)) {
      auto it = values.find(var_of(slot));
      if (it != values.end() && it->second != kUnset) add(s, slot, it->second == 1);
    }
    return s;
  }

  // Phase-1 statuses for `roots` and everything they depend on. A set's
  // status when y arrives is decided by its earlier members in rank order:
  // once dangerous_at(1) of them are colored it is either killed or
  // dangerous for good (later members are saved). So y only needs its
  // edges' earliest members up to that point. Statuses are memoized per
  // query; evaluation uses an explicit stack.
  void ensure_phase1(std::span<const VertexId> roots, Query& q) const {
    const int need = std::max(1, dangerous_at(1));
    struct Frame {
      Frame(VertexId v, Rank r) : y(v), ry(r) {}
      VertexId y;
      Rank ry;
      std::size_t edge = 0;  // position in incident(y)
      std::vector<std::pair<Rank, std::uint32_t>> earlier;  // (rank, slot index) of the current edge
      std::size_t pos = 0;
      SetState state;
      bool opened = false;
    };
    std::vector<Frame> stack;
    for (auto r : roots) {
      if (q.phase1.count(r)) continue;
      stack.push_back(Frame{r, rank(r)});
      ++q.probes;
      while (!stack.empty()) {
        Frame& f = stack.back();
        const auto inc = sys_->incident(f.y);
        if (f.edge == inc.size()) {
          q.phase1[f.y] = phase1_coin(f.y) ? 1 : 0;
          stack.pop_back();
          continue;
        }
        const auto members = sys_->members(inc[f.edge]);
        if (!f.opened) {
          ++q.probes;
          f.earlier.clear();
          for (std::uint32_t j = 0; j < members.size(); ++j) {
            const Rank rz = rank(var_of(members[j]));
            if (rz < f.ry) f.earlier.emplace_back(rz, j);
          }
          std::sort(f.earlier.begin(), f.earlier.end());
          f.pos = 0;
          f.state = {};
          f.opened = true;
        }
        bool pushed = false;
        while (f.state.assigned < need && f.pos < f.earlier.size()) {
          const auto& slot = members[f.earlier[f.pos].second];
          const VertexId z = var_of(slot);
          auto it = q.phase1.find(z);
          if (it == q.phase1.end()) {
            const Rank rz = f.earlier[f.pos].first;
            stack.push_back(Frame{z, rz});  // invalidates f
            ++q.probes;
            pushed = true;
            break;
          }
          if (it->second != kUnset) add(f.state, slot, it->second == 1);
          ++f.pos;
        }
        if (pushed) continue;
        if (f.state.assigned >= need && !killed(f.state)) {
          q.phase1[f.y] = kUnset;
          stack.pop_back();
          continue;
        }
        ++f.edge;
        f.opened = false;
      }
    }
  }

  std::vector<VertexId> uncolored_by_rank(const std::vector<std::uint32_t>& component, const Values& values,
                                          Query& q) const {
    std::vector<std::pair<Rank, VertexId>> out;
    std::unordered_set<VertexId> seen;
    for (auto e : component) {
      for (auto v : vars_of(e, q)) {
        if (values.at(v) == kUnset && seen.insert(v).second) out.emplace_back(rank(v), v);
      }
    }
    std::sort(out.begin(), out.end());
    std::vector<VertexId> ids;
    for (auto& [r, v] : out) ids.push_back(v);
    return ids;
  }

  // One sequential random coloring of `uncolored` in rank order, with coins
  // from the (phase, round) ensemble.
  void random_phase(int phase, std::uint64_t round, const std::unordered_set<std::uint32_t>& in_component,
                    const std::vector<VertexId>& uncolored, Values& values, Query& q) const {
    const std::uint64_t key =
        derive_subseed(seed_, "phased/coins/" + std::to_string(phase), round).digest(domain::kCoin);
    for (auto v : uncolored) {
      bool saved = false;
      ++q.probes;
      for (auto e : sys_->incident(v)) {
        if (!in_component.count(e)) continue;
        if (dangerous(state_of(e, values, q), phase)) {
          saved = true;
          break;
        }
      }
      if (!saved) values[v] = static_cast<VertexValue>(keyed_hash(key, v) & 1);
    }
  }

  // Connected components of the surviving sets of `component`; two sets are
  // adjacent when they share a vertex.
  std::vector<std::vector<std::uint32_t>> survived_components(const std::vector<std::uint32_t>& component,
                                                              const std::unordered_set<std::uint32_t>& in_component,
                                                              const Values& values, Query& q) const {
    std::unordered_set<std::uint32_t> alive;
    for (auto e : component) {
      if (!killed(state_of(e, values, q))) alive.insert(e);
    }
    std::vector<std::vector<std::uint32_t>> pieces;
    std::unordered_set<std::uint32_t> done;
    for (auto start : component) {
      if (!alive.count(start) || done.count(start)) continue;
      std::vector<std::uint32_t> piece{start};
      done.insert(start);
      for (std::size_t head = 0; head < piece.size(); ++head) {
        for (auto v : vars_of(piece[head], q)) {
          ++q.probes;
          for (auto f : sys_->incident(v)) {
            if (in_component.count(f) && alive.count(f) && done.insert(f).second) piece.push_back(f);
          }
        }
      }
      std::sort(piece.begin(), piece.end());
      pieces.push_back(std::move(piece));
    }
    return pieces;
  }

  std::vector<std::uint32_t> piece_containing(VertexId x, const std::vector<std::vector<std::uint32_t>>& pieces,
                                              Query& q) const {
    ++q.probes;
    const auto inc = sys_->incident(x);
    for (const auto& piece : pieces) {
      for (auto e : inc) {
        if (std::binary_search(piece.begin(), piece.end(), e)) return piece;
      }
    }
    // x is uncolored, so some set containing x was dangerous and survived.
    throw std::logic_error("uncolored vertex without a surviving set");
  }

  // Enumerates assignments of the uncolored vertices (ascending id; bit j of
  // the counter is vertex j) and keeps the first that kills every set.
  bool brute_force(VertexId x, const std::vector<std::uint32_t>& component, Values& values, Query& q) const {
    std::vector<VertexId> free_vars;
    for (auto e : component) {
      for (auto v : vars_of(e, q)) {
        if (values.at(v) == kUnset) free_vars.push_back(v);
      }
    }
    std::sort(free_vars.begin(), free_vars.end());
    free_vars.erase(std::unique(free_vars.begin(), free_vars.end()), free_vars.end());
    const std::uint64_t space =
        free_vars.size() >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << free_vars.size());
    const std::uint64_t trials = std::min(space, limits_.brute_force_trials);
    for (std::uint64_t mask = 0; mask < trials; ++mask) {
      for (std::size_t j = 0; j < free_vars.size(); ++j) {
        values[free_vars[j]] = static_cast<VertexValue>(j < 64 ? (mask >> j) & 1 : 0);
      }
      bool all_killed = true;
      for (auto e : component) {
        if (!killed(state_of(e, values, q))) {
          all_killed = false;
          break;
        }
      }
      if (all_killed) return values.at(x) == 1;
    }
    throw LocalFailure("phase 4: no valid assignment of " + std::to_string(free_vars.size()) +
                           " vertices within " + std::to_string(trials) + " trials",
                       q.probes, component.size());
  }

  const System* sys_;
  RankOracle order_;
  Seed seed_;
  std::uint64_t d_ = 0;
  PhaseThresholds thresholds_;
  PhaseLimits limits_;
  std::uint64_t phase1_key_ = 0;
};

// Sequential phase-1 run over every vertex in rank order with incremental
// edge states. Independent of the local closure logic; used to check it.
template <typename Slot>
struct Phase1Run {
  std::vector<VertexValue> status;
  // (set, uncolored count at the moment it became dangerous)
  std::vector<std::pair<std::uint32_t, int>> dangerous_events;
};

template <typename Slot>
Phase1Run<Slot> phase1_global(const SetSystem<Slot>& sys, const PhasedLca<Slot>& lca) {
  Phase1Run<Slot> run;
  run.status.assign(sys.vertex_count(), kUnset);
  std::vector<std::pair<Rank, VertexId>> order;
  for (VertexId v = 0; v < sys.vertex_count(); ++v) order.emplace_back(lca.rank(v), v);
  std::sort(order.begin(), order.end());
  const int k = static_cast<int>(sys.uniformity());
  const int need = lca.dangerous_at(1);
  std::vector<int> assigned(sys.set_count(), 0);
  std::vector<char> has_true(sys.set_count(), 0), has_false(sys.set_count(), 0), danger(sys.set_count(), 0);
  auto killed = [&](std::uint32_t e) {
    if constexpr (std::is_same_v<Slot, Literal>) {
      return has_true[e] != 0;
    } else {
      return has_true[e] && has_false[e];
    }
  };
  for (const auto& [r, v] : order) {
    bool saved = false;
    for (auto e : sys.incident(v)) saved = saved || danger[e];
    if (saved) continue;
    const bool value = lca.phase1_coin(v);
    run.status[v] = value ? 1 : 0;
    for (auto e : sys.incident(v)) {
      for (const auto& slot : sys.members(e)) {
        if (var_of(slot) != v) continue;
        bool lit;
        if constexpr (std::is_same_v<Slot, Literal>) {
          lit = slot.satisfied_by(value);
        } else {
          lit = value;
        }
        (lit ? has_true[e] : has_false[e]) = 1;
      }
      ++assigned[e];
      if (!danger[e] && !killed(e) && assigned[e] >= need) {
        danger[e] = 1;
        run.dangerous_events.emplace_back(e, k - assigned[e]);
      }
    }
  }
  return run;
}

struct FullAssignment {
  std::vector<bool> values;
  std::array<std::uint64_t, 4> phase_histogram{};
  std::uint64_t max_probes = 0;
  std::uint64_t total_probes = 0;
};

// Queries every vertex; the first LocalFailure propagates.
template <typename Slot>
FullAssignment solve_all(const SetSystem<Slot>& sys, const Seed& seed, const PhaseParams& params) {
  const PhasedLca<Slot> lca(sys, seed, params);
  FullAssignment out;
  out.values.resize(sys.vertex_count());
  for (VertexId v = 0; v < sys.vertex_count(); ++v) {
    const auto a = lca.query(v);
    out.values[v] = a.value;
    ++out.phase_histogram[static_cast<std::size_t>(a.phase_resolved - 1)];
    out.max_probes = std::max(out.max_probes, a.probes);
    out.total_probes += a.probes;
  }
  return out;
}

inline ColoringAnswer color_query(const Hypergraph& h, VertexId x, const Seed& seed, const PhaseParams& params) {
  const auto a = PhasedLca<VertexId>(h, seed, params).query(x);
  return {to_color(a.value), a.phase_resolved, a.probes};
}

inline FullAssignment color_all(const Hypergraph& h, const Seed& seed, const PhaseParams& params) {
  return solve_all(h, seed, params);
}

inline LocalAnswer sat_query(const CnfFormula& f, VertexId var, const Seed& seed, const PhaseParams& params) {
  return PhasedLca<Literal>(f, seed, params).query(var);
}

inline FullAssignment sat_all(const CnfFormula& f, const Seed& seed, const PhaseParams& params) {
  return solve_all(f, seed, params);
}

// true = blue. True iff every edge sees both colors.
inline bool verify_coloring(const Hypergraph& h, const std::vector<bool>& colors) {
  LCA_REQUIRE(colors.size() == h.vertex_count(), "verify_coloring: one color per vertex required");
  for (const auto& edge : h.sets()) {
    bool red = false, blue = false;
    for (auto v : edge) (colors[v] ? blue : red) = true;
    if (!(red && blue)) return false;
  }
  return true;
}

inline bool verify_coloring(const Hypergraph& h, const std::vector<Color>& colors) {
  std::vector<bool> b(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) b[i] = colors[i] == Color::Blue;
  return verify_coloring(h, b);
}

inline bool evaluate_cnf(const CnfFormula& f, const std::vector<bool>& assignment) {
  LCA_REQUIRE(assignment.size() == f.vertex_count(), "evaluate_cnf: one value per variable required");
  return std::all_of(f.sets().begin(), f.sets().end(), [&](const auto& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](const Literal& l) { return l.satisfied_by(assignment[l.var]); });
  });
}

}  // namespace lca
