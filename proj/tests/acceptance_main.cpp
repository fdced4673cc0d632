#include "verify/acceptance.hpp"

#include <cstdio>
#include <iostream>

// One line per criterion; exits nonzero when any criterion fails.
int main() {
  using namespace rootflow::verify;
  int passed = 0, total = 0;
  run(Options{}, [&](const CriterionResult& r) {
    std::cout << format(r) << std::endl;
    ++total;
    if (r.pass) ++passed;
  });
  std::cout << passed << "/" << total << " criteria passed" << std::endl;
  return passed == total ? 0 : 1;
}
