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


// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "lca/acceptance.hpp"

int main(int argc, char** argv) {
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  if (argc > 1) jobs = static_cast<unsigned>(std::stoul(argv[1]));
  const auto results = lca::acceptance::run_all(std::cout, jobs);
  int failed = 0;
  for (const auto& c : results) failed += !c.pass;
  std::cout << (failed ? "FAILED " : "PASSED ") << results.size() - static_cast<std::size_t>(failed) << "/"
            << results.size() << " criteria" << std::endl;
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
