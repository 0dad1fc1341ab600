// Acceptance gate: runs every top-level criterion and prints one verdict
// line each. Exit status is the number of failing criteria.
#include <cstdio>
#include <exception>

#include <degenlab/suite.hpp>

int main() {
  int failures = 0;
  try {
    const auto results = degenlab::run_all_criteria();
    for (const degenlab::CriterionResult& c : results) {
      std::printf("criterion %2d [%s]: %s - %s\n", c.index, c.name.c_str(),
                  c.pass ? "PASS" : "FAIL", c.detail.c_str());
      std::fflush(stdout);
      failures += c.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 99;
  }
  return failures;
}
