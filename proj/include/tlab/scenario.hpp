#pragma once

// Scenario files (TOML) and the built-in copies of the shipped scenarios.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/billiards.hpp"
#include "tlab/curve.hpp"
#include "tlab/omega.hpp"

namespace tlab {

enum class ScenarioKind { Flow, Billiard, LocalModel, Poset };

std::string to_string(ScenarioKind k);

struct FlowSpec {
  std::string w;
  Box box{};
  int boundary_samples = 2048;
  std::string vx, vy;
  int samples = 2048;
  std::optional<std::string> height;
  int interior_grid = 320;
  double graze_scale = 1.0;
  std::optional<int> expect_euler;
  std::optional<int> expect_junctions;
  std::optional<int> expect_singletons;
};

struct CurveSpec {
  std::string type;  // circle, ellipse, implicit
  Vec2 centre;
  double radius = 0.0;
  double a = 0.0, b = 0.0;
  std::string g;
  Box box{};
};

struct OrbitSpec {
  int curve = 0;
  Vec2 start;
  Vec2 direction;
  int iterations = 100;
};

struct PonceletSpec {
  Conic outer{};
  std::optional<Conic> inner;  // absent: confocal closure found by bisection
  int k = 3;
  int starts = 10;
  std::optional<int> reject_k;  // period whose residuals must exceed 0.1
};

struct BilliardSpec {
  std::vector<CurveSpec> curves;
  std::optional<OrbitSpec> orbit;
  std::optional<PonceletSpec> poncelet;
  std::size_t census_lines = 0;
};

struct LocalModelSpec {
  OmegaWord word;
  std::vector<double> centres;
  double box_radius = 1.0;
  int chain_samples = 1000;
  int table_samples = 21;
};

struct PosetSpec {
  int max_reduced_norm = 2;
  int max_support = 5;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Flow;
  std::uint64_t seed = 0;
  std::string hash;  // FNV-1a of the source text, 16 hex digits
  bool figures = true;
  bool tables = true;
  std::optional<FlowSpec> flow;
  std::optional<BilliardSpec> billiard;
  std::optional<LocalModelSpec> local_model;
  std::optional<PosetSpec> poset;
};

std::string fnv1a_hex(std::string_view text);

/// Throws Error(Config) on TOML syntax errors, unknown keys, missing or
/// mistyped fields and expressions that do not parse.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

BilliardTable build_table(const BilliardSpec& spec);

struct BuiltinScenario {
  std::string_view file;  // e.g. "annulus.toml"
  std::string_view text;
};

/// The files of scenarios/, compiled in.
const std::vector<BuiltinScenario>& builtin_scenarios();
Scenario builtin_scenario(std::string_view name);

}  // namespace tlab
