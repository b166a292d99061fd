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

// Experiment specs, dispatch and JSON/CSV report emission for the CLI.
// A report is a pure function of its spec: wall-clock time is only added
// on request.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lca/error.hpp"
#include "lca/experiments.hpp"
#include "lca/io.hpp"

namespace lca {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kDefaultSeedHex = "00000000000000000000000000000000000000000000000000000000000007e5";
inline constexpr const char* kSeedEnv = "LCA_SEED";

enum class ExitCode : int { Ok = 0, InvalidSpec = 2, GenerationFailed = 3, BudgetExceeded = 4 };

struct ExperimentSpec {
  std::string command;
  std::string target;  // oracle-compare: matching | balls-bins
  std::string seed_hex = kDefaultSeedHex;
  std::string seed_source = "default";
  std::uint64_t n = 1024;
  std::uint64_t m = 0;  // 0: same as n where the command has both
  std::optional<double> d;  // unset: per-command default
  std::uint64_t k = 40;
  double L = 9;
  std::string law = "regular";    // gw-sim: regular | binomial
  std::string model = "bounded";  // tree-stats: bounded | binomial
  std::string rule = "least-loaded";
  std::string ordering = "full";  // full | kwise
  std::uint64_t kwise_k = 8;
  std::uint64_t trials = 1;
  std::uint64_t instances = 1;
  std::uint64_t cap = 0;          // 0: command default
  double cap_constant = 6.0;
  std::optional<double> failure_budget;
  std::string input;              // instance file (coloring, ksat, matching, balls-bins)
  std::string capacities;         // balls-bins capacity file
  std::string format = "json";
  std::string out;
  bool strict = true;
  unsigned jobs = 1;
  bool timing = false;
};

struct RunOutcome {
  ExitCode code = ExitCode::Ok;
  std::string message;  // diagnostics for stderr
  std::string output;   // report text; empty unless code == Ok
};

namespace report {

using nlohmann::ordered_json;

inline ordered_json echo(const ExperimentSpec& s) {
  ordered_json j;
  j["command"] = s.command;
  if (!s.target.empty()) j["target"] = s.target;
  j["seed"] = s.seed_hex;
  j["seed_source"] = s.seed_source;
  j["n"] = s.n;
  j["m"] = s.m;
  j["d"] = s.d.value_or(0);
  j["k"] = s.k;
  j["L"] = s.L;
  j["law"] = s.law;
  j["model"] = s.model;
  j["rule"] = s.rule;
  j["ordering"] = s.ordering;
  j["kwise_k"] = s.kwise_k;
  j["trials"] = s.trials;
  j["instances"] = s.instances;
  j["cap"] = s.cap;
  j["cap_constant"] = s.cap_constant;
  if (s.failure_budget) j["failure_budget"] = *s.failure_budget;
  if (!s.input.empty()) j["input"] = s.input;
  if (!s.capacities.empty()) j["capacities"] = s.capacities;
  j["format"] = s.format;
  j["strict"] = s.strict;
  return j;
}

inline std::string fingerprint(const ordered_json& spec_echo) {
  const std::string text = std::string(kVersion) + "|" + spec_echo.dump();
  std::uint64_t h = 0;
  for (unsigned char c : text) h = absorb(h, c);
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline ordered_json stats_json(const TreeStats& s) {
  ordered_json j;
  j["trials"] = s.trials;
  j["mean"] = s.mean_size;
  j["max"] = s.max_size;
  ordered_json hist = ordered_json::object();
  for (const auto& [size, count] : s.histogram) hist[std::to_string(size)] = count;
  j["histogram"] = hist;
  ordered_json tail = ordered_json::object();
  for (const auto& [t, p] : s.tail) tail[std::to_string(t)] = p;
  j["tail"] = tail;
  j["truncated"] = s.truncated;
  j["mean_probes"] = s.mean_probes;
  j["max_probes"] = s.max_probes;
  return j;
}

inline std::vector<std::uint64_t> doubling_thresholds(std::uint64_t limit) {
  std::vector<std::uint64_t> t;
  for (std::uint64_t s = 1; s <= limit && s != 0; s *= 2) t.push_back(s);
  return t;
}

inline OrderingKind ordering_of(const ExperimentSpec& s) {
  if (s.ordering == "full") return FullPseudorandom{};
  if (s.ordering == "kwise") return KWiseIndependent{static_cast<unsigned>(s.kwise_k), kMersenne61};
  throw InvalidArgument("unknown ordering '" + s.ordering + "' (expected full or kwise)");
}

inline std::uint64_t bins_of(const ExperimentSpec& s) { return s.m ? s.m : s.n; }

template <typename Read>
auto load(const std::string& path, Read read) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  return read(in);
}

struct Result {
  ordered_json json;
  std::string csv;
  std::uint64_t failures = 0;
  std::uint64_t attempts = 0;
};

inline Result tree_stats_cmd(const ExperimentSpec& s, const Seed& seed) {
  TreeExperiment x;
  if (s.model == "bounded") {
    x.model = GraphModel::BoundedDegree;
  } else if (s.model == "binomial") {
    x.model = GraphModel::Binomial;
  } else {
    throw InvalidArgument("unknown model '" + s.model + "' (expected bounded or binomial)");
  }
  LCA_REQUIRE(s.n >= 1, "n must be >= 1");
  LCA_REQUIRE(*s.d >= 0, "d must be >= 0");
  x.n = s.n;
  x.d = *s.d;
  x.trials = s.trials;
  x.instances = s.instances;
  x.cap = s.cap ? s.cap : std::size_t{1} << 30;
  x.ordering = ordering_of(s);
  x.thresholds = doubling_thresholds(s.n);
  x.jobs = s.jobs;
  LCA_REQUIRE(x.trials >= 1, "trials must be >= 1");
  const auto stats = tree_stats(seed, x);
  Result r;
  r.json["stats"] = stats_json(stats);
  r.json["max_over_log2n"] = static_cast<double>(stats.max_size) / std::max(1.0, std::log2(static_cast<double>(s.n)));
  r.csv = "size,count\n";
  for (const auto& [size, count] : stats.histogram) r.csv += std::to_string(size) + "," + std::to_string(count) + "\n";
  return r;
}

inline Result gw_sim_cmd(const ExperimentSpec& s, const Seed& seed) {
  LCA_REQUIRE(s.L >= 1, "L must be >= 1");
  OffspringLaw law;
  if (s.law == "regular") {
    LCA_REQUIRE(*s.d >= 0 && *s.d == std::floor(*s.d), "regular law needs integer d >= 0");
    law = RegularOffspring{static_cast<std::uint32_t>(*s.d), s.L};
  } else if (s.law == "binomial") {
    LCA_REQUIRE(s.n >= 1, "n must be >= 1");
    law = BinomialOffspring{s.n, *s.d / (static_cast<double>(s.n) * s.L)};
  } else {
    throw InvalidArgument("unknown law '" + s.law + "' (expected regular or binomial)");
  }
  const double mu = mean_offspring(law);
  LCA_REQUIRE(mu < 1, "offspring mean must be < 1 (subcritical)");
  const std::uint64_t cap = s.cap ? s.cap : std::uint64_t{1} << 40;
  const auto stats = gw_stats(seed, law, s.trials, cap, doubling_thresholds(1u << 10), s.jobs);
  Result r;
  r.json["stats"] = stats_json(stats);
  r.json["offspring_mean"] = mu;
  r.json["expected_mean"] = 1.0 / (1.0 - mu);
  try {
    r.json["tail_slope_5_30"] = log_tail_slope(stats, 5, 30);
  } catch (const InvalidArgument&) {
    r.json["tail_slope_5_30"] = nullptr;
  }
  r.csv = "size,count\n";
  for (const auto& [size, count] : stats.histogram) r.csv += std::to_string(size) + "," + std::to_string(count) + "\n";
  return r;
}

inline LocalGraph matching_instance(const ExperimentSpec& s, const Seed& trial) {
  if (!s.input.empty()) return load(s.input, io::read_graph);
  LCA_REQUIRE(*s.d >= 0 && *s.d == std::floor(*s.d), "matching needs integer d >= 0");
  return gen_bounded_degree(derive_subseed(trial, "instance"), s.n, static_cast<std::size_t>(*s.d));
}

inline Result matching_cmd(const ExperimentSpec& s, const Seed& seed) {
  LCA_REQUIRE(s.trials >= 1, "trials must be >= 1");
  const auto kind = ordering_of(s);
  Result r;
  ordered_json runs = ordered_json::array();
  std::uint64_t mismatches = 0;
  r.csv = "trial,edges,matched,mismatches,maximal,failed,max_probes\n";
  for (std::uint64_t t = 0; t < s.trials; ++t) {
    const Seed ts = trial_seed(seed, t);
    const auto g = matching_instance(s, ts);
    const std::size_t cap = s.cap ? s.cap : std::max<std::size_t>(g.edge_count(), 1);
    const auto run = matching_trial(g, ts, kind, cap);
    mismatches += run.mismatches;
    r.failures += run.failed;
    ++r.attempts;
    ordered_json j;
    j["trial"] = t;
    j["edges"] = run.edges;
    j["matched"] = run.matched;
    j["mismatches"] = run.mismatches;
    j["maximal"] = run.maximal;
    j["failed"] = run.failed;
    j["max_probes"] = run.max_probes;
    runs.push_back(j);
    r.csv += std::to_string(t) + "," + std::to_string(run.edges) + "," + std::to_string(run.matched) + "," +
             std::to_string(run.mismatches) + "," + (run.maximal ? "1" : "0") + "," + (run.failed ? "1" : "0") + "," +
             std::to_string(run.max_probes) + "\n";
  }
  r.json["mismatches"] = mismatches;
  r.json["failures"] = r.failures;
  r.json["runs"] = runs;
  return r;
}

inline BipartiteChoices balls_bins_instance(const ExperimentSpec& s, const Seed& trial, DecisionRule rule) {
  if (!s.input.empty()) return load(s.input, io::read_choices);
  LCA_REQUIRE(*s.d >= 1 && *s.d == std::floor(*s.d), "balls-bins needs integer d >= 1");
  ChoiceOptions opt{scheme_for(rule), {}};
  if (!s.capacities.empty()) opt.capacities = load(s.capacities, io::read_capacities);
  return gen_bipartite_choices(derive_subseed(trial, "instance"), s.n, bins_of(s), static_cast<std::size_t>(*s.d), opt);
}

inline Result balls_bins_cmd(const ExperimentSpec& s, const Seed& seed) {
  LCA_REQUIRE(s.trials >= 1, "trials must be >= 1");
  LCA_REQUIRE(s.cap_constant > 0, "cap-constant must be > 0");
  const auto rule = parse_rule(s.rule);
  const auto kind = ordering_of(s);
  Result r;
  std::vector<LoadProfile> local_profiles;
  std::uint64_t mismatches = 0, max_probes = 0, balls = 0;
  double probe_sum = 0;
  ordered_json runs = ordered_json::array();
  for (std::uint64_t t = 0; t < s.trials; ++t) {
    const Seed ts = trial_seed(seed, t);
    const auto bc = balls_bins_instance(s, ts, rule);
    const std::size_t cap = s.cap ? s.cap : default_cap(bc.m_bins(), s.cap_constant);
    auto run = balls_bins_trial(bc, rule, ts, kind, cap, s.jobs);
    LoadProfile p;
    p.max_load = run.max_load;
    local_profiles.push_back(p);
    mismatches += run.mismatches;
    r.failures += run.failures;
    r.attempts += run.balls;
    balls += run.balls;
    max_probes = std::max(max_probes, run.max_probes);
    probe_sum += run.mean_probes * static_cast<double>(run.balls);
    ordered_json j;
    j["trial"] = t;
    j["cap"] = cap;
    j["failures"] = run.failures;
    j["mismatches"] = run.mismatches;
    j["max_load"] = run.max_load;
    j["global_max_load"] = run.global_max_load;
    runs.push_back(j);
    if (t == 0) {
      r.csv = "ball,bin,failed,probes\n";
      for (const auto& a : run.assignments) {
        r.csv += std::to_string(a.ball) + "," + std::to_string(a.bin) + "," + (a.failed ? "1" : "0") + "," +
                 std::to_string(a.probes) + "\n";
      }
    }
  }
  const auto summary = max_load_report(local_profiles);
  r.json["rule"] = std::string(to_string(rule));
  r.json["seeds"] = s.trials;
  r.json["failure_rate"] = balls ? static_cast<double>(r.failures) / static_cast<double>(balls) : 0.0;
  r.json["mismatches"] = mismatches;
  r.json["max_load"] = {{"mean", summary.mean}, {"min", summary.min}, {"p50", summary.p50},
                        {"p95", summary.p95},   {"max", summary.max}};
  r.json["probes"] = {{"mean", balls ? probe_sum / static_cast<double>(balls) : 0.0}, {"max", max_probes}};
  r.json["runs"] = runs;
  return r;
}

template <typename Slot>
Result phased_cmd(const ExperimentSpec& s, const Seed& seed) {
  constexpr bool kSat = std::is_same_v<Slot, Literal>;
  LCA_REQUIRE(s.trials >= 1, "trials must be >= 1");
  LCA_REQUIRE(*s.d >= 0 && *s.d == std::floor(*s.d), "coloring needs integer d >= 0");
  // Generated instances are checked against the declared degree bound,
  // files against their measured dependency degree.
  const std::optional<std::uint64_t> declared =
      s.input.empty() ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(*s.d)) : std::nullopt;
  const PhaseParams params{declared, s.strict, ordering_of(s)};
  const std::uint64_t m = s.m ? s.m : s.n * s.k / 2;
  Result r;
  ordered_json runs = ordered_json::array();
  std::array<std::uint64_t, 4> hist{};
  std::uint64_t invalid = 0;
  r.csv = "trial,failed,valid,phase1,phase2,phase3,phase4,max_probes\n";
  for (std::uint64_t t = 0; t < s.trials; ++t) {
    const Seed ts = trial_seed(seed, t);
    SetSystem<Slot> sys = [&] {
      if constexpr (kSat) {
        if (!s.input.empty()) return load(s.input, io::read_dimacs);
        return gen_cnf(derive_subseed(ts, "instance"), m, s.n, s.k, static_cast<std::size_t>(*s.d));
      } else {
        if (!s.input.empty()) return load(s.input, io::read_hypergraph);
        return gen_hypergraph(derive_subseed(ts, "instance"), m, s.n, s.k, static_cast<std::size_t>(*s.d));
      }
    }();
    // Validate thresholds up front so strict-mode violations surface with exit code 2.
    if (sys.set_count() > 0) {
      const std::uint64_t d = declared.value_or(sys.max_dependency_degree());
      compute_thresholds(static_cast<int>(sys.uniformity()), d, s.strict);
    }
    const auto run = phased_trial(sys, ts, params);
    r.failures += run.failed;
    ++r.attempts;
    invalid += !run.failed && !run.valid;
    for (int i = 0; i < 4; ++i) hist[static_cast<std::size_t>(i)] += run.phase_histogram[static_cast<std::size_t>(i)];
    ordered_json j;
    j["trial"] = t;
    j["failed"] = run.failed;
    if (run.failed) j["failure"] = run.failure;
    j["valid"] = run.valid;
    j["phase_histogram"] = run.phase_histogram;
    j["max_probes"] = run.max_probes;
    if (s.trials == 1 && !run.failed) {
      ordered_json values = ordered_json::array();
      for (bool v : run.values) {
        if constexpr (kSat) {
          values.push_back(v);
        } else {
          values.push_back(v ? "blue" : "red");
        }
      }
      j[kSat ? "assignment" : "colors"] = values;
    }
    runs.push_back(j);
    r.csv += std::to_string(t) + "," + (run.failed ? "1" : "0") + "," + (run.valid ? "1" : "0");
    for (auto h : run.phase_histogram) r.csv += "," + std::to_string(h);
    r.csv += "," + std::to_string(run.max_probes) + "\n";
  }
  r.json["failures"] = r.failures;
  r.json["invalid"] = invalid;
  r.json["phase_histogram"] = hist;
  r.json["runs"] = runs;
  return r;
}

inline Result lower_bound_cmd(const ExperimentSpec& s, const Seed& seed) {
  const auto lb = lower_bound_experiment(s.n, s.trials, seed, s.jobs);
  Result r;
  r.json["path_len"] = lb.path_len;
  r.json["trials"] = lb.trials;
  r.json["hits"] = lb.hits;
  r.json["frequency"] = lb.frequency;
  r.json["expected"] = lb.expected;
  r.json["std_error"] = lb.std_error;
  r.json["z"] = lb.std_error > 0 ? (lb.frequency - lb.expected) / lb.std_error : 0.0;
  r.csv = "path_len,trials,hits,frequency,expected\n" + std::to_string(lb.path_len) + "," + std::to_string(lb.trials) +
          "," + std::to_string(lb.hits) + "," + r.json["frequency"].dump() + "," + r.json["expected"].dump() + "\n";
  return r;
}

inline Result oracle_compare_cmd(const ExperimentSpec& s, const Seed& seed) {
  Result r;
  if (s.target == "matching") {
    r = matching_cmd(s, seed);
  } else if (s.target == "balls-bins") {
    r = balls_bins_cmd(s, seed);
  } else {
    throw InvalidArgument("oracle-compare target must be matching or balls-bins, got '" + s.target + "'");
  }
  ordered_json j;
  j["target"] = s.target;
  j["mismatches"] = r.json["mismatches"];
  j["failures"] = r.failures;
  j["runs"] = r.json["runs"];
  r.json = j;
  return r;
}

inline double default_degree(const std::string& command) {
  if (command == "balls-bins" || command == "coloring" || command == "ksat") return 2;
  if (command == "gw-sim") return 3;
  return 5;
}

inline double default_budget(const std::string& command) {
  if (command == "balls-bins" || (command == "oracle-compare")) return 1e-3;
  return 0.01;
}

}  // namespace report

inline Seed parse_seed(const std::string& hex) {
  try {
    return Seed::from_hex(hex);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("bad --seed: ") + e.what());
  }
}

// Runs one experiment. Output is produced only on success.
inline RunOutcome run(ExperimentSpec spec) {
  using report::ordered_json;
  if (!spec.d) spec.d = report::default_degree(spec.command == "oracle-compare" ? spec.target : spec.command);
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    LCA_REQUIRE(spec.format == "json" || spec.format == "csv", "format must be json or csv");
    LCA_REQUIRE(spec.jobs >= 1, "jobs must be >= 1");
    const Seed seed = parse_seed(spec.seed_hex);
    report::Result r;
    const auto& c = spec.command;
    if (c == "tree-stats") {
      r = report::tree_stats_cmd(spec, seed);
    } else if (c == "gw-sim") {
      r = report::gw_sim_cmd(spec, seed);
    } else if (c == "matching") {
      r = report::matching_cmd(spec, seed);
    } else if (c == "coloring") {
      r = report::phased_cmd<VertexId>(spec, seed);
    } else if (c == "ksat") {
      r = report::phased_cmd<Literal>(spec, seed);
    } else if (c == "balls-bins") {
      r = report::balls_bins_cmd(spec, seed);
    } else if (c == "oracle-compare") {
      r = report::oracle_compare_cmd(spec, seed);
    } else if (c == "lower-bound") {
      r = report::lower_bound_cmd(spec, seed);
    } else {
      throw InvalidArgument("unknown command '" + c + "'");
    }

    const double budget = spec.failure_budget.value_or(report::default_budget(c));
    if (r.attempts > 0 && static_cast<double>(r.failures) > budget * static_cast<double>(r.attempts)) {
      out.code = ExitCode::BudgetExceeded;
      out.message = "failure budget exceeded: " + std::to_string(r.failures) + " of " + std::to_string(r.attempts) +
                    " (budget " + std::to_string(budget) + ")";
      return out;
    }

    if (spec.format == "csv") {
      out.output = r.csv;
    } else {
      ordered_json doc;
      const auto echo = report::echo(spec);
      doc["version"] = kVersion;
      doc["fingerprint"] = report::fingerprint(echo);
      doc["spec"] = echo;
      doc["result"] = r.json;
      if (spec.timing) {
        doc["wall_clock_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      out.output = doc.dump(2) + "\n";
    }
  } catch (const GenerationError& e) {
    out.code = ExitCode::GenerationFailed;
    out.message = std::string("instance generation failed: ") + e.what();
  } catch (const ParseError& e) {
    out.code = ExitCode::InvalidSpec;
    out.message = std::string("input error: ") + e.what();
  } catch (const InvalidArgument& e) {
    out.code = ExitCode::InvalidSpec;
    out.message = std::string("invalid spec: ") + e.what();
  }
  return out;
}

}  // namespace lca
