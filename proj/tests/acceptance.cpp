// Acceptance battery: runs every named suite and prints one line per
// criterion. Exits nonzero when any suite fails its checks or its budget.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "spanforge/suites.hpp"

int main(int argc, char** argv) {
  uint64_t seed = 20260808ull;
  if (const char* env = std::getenv("SPANFORGE_SEED")) seed = std::strtoull(env, nullptr, 10);
  bool all_pass = true;
  int idx = 0;
  for (const auto& [name, budget] : spanforge::suite_registry()) {
    ++idx;
    if (argc > 1 && std::strcmp(argv[1], name.c_str()) != 0) continue;
    spanforge::SuiteResult r = spanforge::run_suite(name, seed);
    std::printf("[%s] criterion %2d %-20s %6ld ms (budget %ld ms)  %s\n",
                r.pass ? "PASS" : "FAIL", idx, r.name.c_str(), r.elapsed_ms, r.budget_ms,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
