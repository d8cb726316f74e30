// Runs the nine acceptance criteria and prints one line per criterion.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "harness/acceptance.hpp"

int main(int argc, char** argv) {
  mpass::harness::HarnessOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
    else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) options.seed = std::strtoull(argv[++i], nullptr, 10);
    else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) options.workers = std::atoi(argv[++i]);
  }
  const auto report = mpass::harness::run_acceptance(options);
  for (const auto& c : report.criteria) {
    std::printf("%s criterion %d (%s): %s [%.1f s", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str(),
                c.seconds);
    if (c.time_limit > 0.0) std::printf(" of %.0f s", c.time_limit);
    std::printf("]\n");
  }
  return report.all_pass() ? EXIT_SUCCESS : EXIT_FAILURE;
}
