// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `fzeta verify --suite paper` runs the same suite.

#include <cstdio>

#include "fzeta/verify.hpp"

int main() {
  const auto results = fzeta::verify::run_all(true);
  int failures = 0;
  for (const auto& r : results) failures += r.pass ? 0 : 1;
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", results.size());
  return 0;
}
