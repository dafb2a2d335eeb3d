#pragma once

// Running a scenario: computed invariants as pass/fail claims in report.json
// plus tables, graphs and figures under the output directory.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "json.hpp"
#include "tlab/scenario.hpp"

namespace tlab {

using Json = nlohmann::ordered_json;

struct RunOptions {
  std::optional<std::filesystem::path> out;  // no files written when absent
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
};

struct RunResult {
  Json report;
  bool pass = true;
  int exit_code = 0;  // 0 all claims hold, 3 a claim failed or the numerics degenerated
};

/// Config errors propagate as Error(Config); numeric errors are caught and
/// recorded in the report with exit code 3.
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace tlab
