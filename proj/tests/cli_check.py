#!/usr/bin/env python3
# Copyright 2026 The lca Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""End-to-end checks of lca_cli: schema, determinism, exit codes, partial output."""

import copy
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, SCHEMA = sys.argv[1], sys.argv[2]
failures = []


def check(name, ok, detail=""):
    print(("PASS " if ok else "FAIL ") + name + (f" ({detail})" if detail else ""))
    if not ok:
        failures.append(name)


def run(args, env=None):
    full_env = dict(os.environ)
    full_env.pop("LCA_SEED", None)
    full_env.update(env or {})
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env)


schema = json.load(open(SCHEMA))
validator = jsonschema.Draft202012Validator(schema)

small = {
    "tree-stats": ["tree-stats", "--n", "256", "--trials", "20"],
    "gw-sim": ["gw-sim", "--trials", "50"],
    "matching": ["matching", "--n", "100", "--trials", "2"],
    "coloring": ["coloring", "--n", "200", "--trials", "1"],
    "ksat": ["ksat", "--n", "200", "--trials", "1"],
    "balls-bins": ["balls-bins", "--n", "200", "--trials", "2"],
    "lower-bound": ["lower-bound", "--L", "3", "--trials", "200"],
    "oracle-compare-matching": ["oracle-compare", "matching", "--n", "100", "--trials", "2"],
    "oracle-compare-balls-bins": ["oracle-compare", "balls-bins", "--n", "100", "--trials", "2"],
}

with tempfile.TemporaryDirectory() as tmp:
    reports = {}
    for name, args in small.items():
        first = run(args)
        second = run(args + ["--jobs", "2"])
        check(f"{name} exits 0", first.returncode == 0, first.stderr.strip())
        if first.returncode != 0:
            continue
        report = json.loads(first.stdout)
        reports[name] = report
        errors = sorted(validator.iter_errors(report), key=str)
        check(f"{name} matches schema", not errors, errors[0].message[:200] if errors else "")
        check(f"{name} byte-identical rerun across jobs", first.stdout == second.stdout)
        check(f"{name} seed source is default", report["spec"]["seed_source"] == "default")

    if "tree-stats" in reports:
        broken = copy.deepcopy(reports["tree-stats"])
        broken["result"]["stats"]["max"] = -1
        check("schema rejects a corrupted report", not validator.is_valid(broken))

    one = run(["tree-stats", "--n", "1", "--trials", "1"])
    check("tree-stats n=1 histogram", one.returncode == 0 and
          json.loads(one.stdout)["result"]["stats"]["histogram"] == {"1": 1}, one.stdout[:200])

    seed = "ab" * 32
    env_run = run(["gw-sim", "--trials", "20"], env={"LCA_SEED": seed})
    flag_run = run(["gw-sim", "--trials", "20", "--seed", seed])
    env_report, flag_report = json.loads(env_run.stdout), json.loads(flag_run.stdout)
    check("seed from environment recorded", env_report["spec"]["seed_source"] == "env:LCA_SEED")
    check("environment and flag seeds agree", env_report["result"] == flag_report["result"])
    other = json.loads(run(["gw-sim", "--trials", "20", "--seed", "cd" * 32]).stdout)
    check("different seed changes fingerprint", other["fingerprint"] != flag_report["fingerprint"])

    csv = run(["balls-bins", "--n", "50", "--trials", "1", "--format", "csv"])
    lines = csv.stdout.strip().splitlines()
    check("balls-bins csv header and rows", csv.returncode == 0 and lines[0] == "ball,bin,failed,probes" and
          len(lines) == 51)

    out_path = os.path.join(tmp, "report.json")
    written = run(["lower-bound", "--L", "3", "--trials", "100", "--out", out_path])
    check("--out writes report", written.returncode == 0 and os.path.exists(out_path) and
          not os.path.exists(out_path + ".partial"))

    cases = [
        ("zero trials", ["tree-stats", "--trials", "0"], 2),
        ("malformed seed", ["gw-sim", "--seed", "xyz"], 2),
        ("unknown flag", ["gw-sim", "--bogus"], 2),
        ("unknown rule", ["balls-bins", "--rule", "nope"], 2),
        ("coloring premise violated", ["coloring", "--n", "100", "--k", "20", "--d", "2"], 2),
        ("missing input file", ["matching", "--input", os.path.join(tmp, "absent.txt")], 2),
        ("unsatisfiable generator", ["coloring", "--n", "60", "--k", "20", "--d", "1", "--m", "40", "--lenient"], 3),
        ("failure budget exceeded", ["balls-bins", "--n", "2000", "--d", "5", "--trials", "2"], 4),
    ]
    for name, args, code in cases:
        target = os.path.join(tmp, name.replace(" ", "_") + ".json")
        result = run(args + ["--out", target])
        check(f"{name} exits {code}", result.returncode == code, f"got {result.returncode}: {result.stderr.strip()[:160]}")
        leftovers = [p for p in os.listdir(tmp) if p.startswith(name.replace(" ", "_"))]
        check(f"{name} leaves no output", not leftovers, ",".join(leftovers))

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
