// Acceptance suite: one PASS/FAIL line per criterion. Pass --quick for
// reduced sample sizes.
#include <cstdio>
#include <cstring>

#include "hawkes/validation.hpp"

int main(int argc, char **argv) {
  hawkes::validation::Options opt;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  int failed = 0;
  hawkes::validation::run_all(opt, [&](const auto &r) {
    std::printf("%s\n", hawkes::validation::format_line(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  });
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
