// Runs the acceptance criteria and prints one line per criterion.

#include <iostream>

#include "tlab/acceptance.hpp"

int main() {
  tlab::AcceptanceOptions options;
  bool pass = true;
  tlab::run_acceptance(options, [&](const tlab::CriterionResult& r) {
    pass = pass && r.pass;
    std::cout << tlab::format_line(r) << std::endl;
  });
  std::cout << (pass ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return pass ? 0 : 1;
}
