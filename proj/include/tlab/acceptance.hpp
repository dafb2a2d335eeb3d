#pragma once

// The acceptance suite run by `traverse-lab selftest` and the acceptance test.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tlab {

struct AcceptanceOptions {
  unsigned jobs = 0;          // 0: hardware concurrency
  double graze_scale = 1.0;   // multiplies the flow graze tolerance everywhere
  std::uint64_t seed = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit = 0.0;  // seconds, 0 when unbounded
  std::string detail;
};

/// Runs the eight criteria in order on the built-in scenarios. `report` is
/// called as each one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& report = {});

/// One line: "PASS  3 holographic round trip  12.30 s / 60 s  detail".
std::string format_line(const CriterionResult& r);

}  // namespace tlab
