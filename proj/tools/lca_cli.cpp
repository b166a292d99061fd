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


// Experiment CLI. Every subcommand emits one JSON report (or CSV rows) that
// is a pure function of its flags; nothing is written unless the run
// succeeds.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lca/acceptance.hpp"
#include "lca/report.hpp"

namespace {

void add_common(CLI::App* cmd, lca::ExperimentSpec& s) {
  cmd->add_option("--seed", s.seed_hex, "64 hex digits; default from $LCA_SEED or a fixed constant");
  cmd->add_option("--n", s.n, "vertices / edges / balls / path length, depending on the command");
  cmd->add_option("--m", s.m, "bins (balls-bins) or vertices (coloring, ksat)");
  cmd->add_option("--d", s.d, "degree, dependency degree or number of choices");
  cmd->add_option("--k", s.k, "uniformity (coloring, ksat)");
  cmd->add_option("--L", s.L, "offspring divisor for gw-sim");
  cmd->add_option("--law", s.law, "gw-sim offspring law: regular | binomial");
  cmd->add_option("--model", s.model, "tree-stats graph model: bounded | binomial");
  cmd->add_option("--rule", s.rule, "least-loaded | always-go-left | capacity-weighted | circle-nearest");
  cmd->add_option("--ordering", s.ordering, "full | kwise");
  cmd->add_option("--kwise-k", s.kwise_k, "independence for --ordering kwise");
  cmd->add_option("--trials", s.trials, "trials (seeds) to run");
  cmd->add_option("--instances", s.instances, "tree-stats: distinct graphs shared round-robin by trials");
  cmd->add_option("--cap", s.cap, "explicit exploration cap (0 = command default)");
  cmd->add_option("--cap-constant", s.cap_constant, "balls-bins cap K = ceil(C log2 m)");
  cmd->add_option("--failure-budget", s.failure_budget, "max tolerated failure fraction");
  cmd->add_option("--input", s.input, "instance file instead of a generated one")->check(CLI::ExistingFile);
  cmd->add_option("--capacities", s.capacities, "balls-bins bin capacity file")->check(CLI::ExistingFile);
  cmd->add_option("--format", s.format, "json | csv");
  cmd->add_option("--out", s.out, "output path (default stdout)");
  cmd->add_flag("--strict,!--lenient", s.strict, "enforce the coloring premise (default) or only warn");
  cmd->add_option("--jobs", s.jobs, "worker threads");
  cmd->add_flag("--timing", s.timing, "add wall-clock time to the report");
}

int emit(const lca::ExperimentSpec& spec, const std::string& text) {
  if (spec.out.empty()) {
    std::cout << text;
    return 0;
  }
  const std::filesystem::path target(spec.out);
  const std::filesystem::path tmp = target.string() + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary);
    f << text;
    if (!f) {
      std::cerr << "cannot write " << tmp << "\n";
      return static_cast<int>(lca::ExitCode::InvalidSpec);
    }
  }
  std::filesystem::rename(tmp, target);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local computation algorithms: experiments and acceptance suite"};
  app.require_subcommand(1);
  lca::ExperimentSpec spec;

  for (const char* name : {"tree-stats", "gw-sim", "matching", "coloring", "ksat", "balls-bins", "lower-bound"}) {
    add_common(app.add_subcommand(name), spec);
  }
  auto* compare = app.add_subcommand("oracle-compare", "compare an LCA against its global oracle");
  compare->add_option("target", spec.target, "matching | balls-bins")->required();
  add_common(compare, spec);

  unsigned accept_jobs = 1;
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--jobs", accept_jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(lca::ExitCode::InvalidSpec);
  }

  if (accept->parsed()) {
    const auto results = lca::acceptance::run_all(std::cout, accept_jobs);
    for (const auto& c : results) {
      if (!c.pass) return 1;
    }
    return 0;
  }

  spec.command = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed") == 0) {
    if (const char* env = std::getenv(lca::kSeedEnv); env && *env) {
      spec.seed_hex = env;
      spec.seed_source = std::string("env:") + lca::kSeedEnv;
    }
  } else {
    spec.seed_source = "flag";
  }

  const auto outcome = lca::run(spec);
  if (outcome.code != lca::ExitCode::Ok) {
    std::cerr << outcome.message << "\n";
    return static_cast<int>(outcome.code);
  }
  return emit(spec, outcome.output);
}
