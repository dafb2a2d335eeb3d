// traverse-lab: scenario runner and acceptance suite.
//
// Exit codes: 0 success, 1 internal error, 2 configuration error,
// 3 numeric degeneracy or a failed claim.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tlab/acceptance.hpp"
#include "tlab/error.hpp"
#include "tlab/parallel.hpp"
#include "tlab/report.hpp"
#include "tlab/scenario.hpp"

namespace {

struct Globals {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool json = false;
};

std::filesystem::path out_root(const Globals& g) {
  if (const char* env = std::getenv("TRAVERSE_LAB_OUT"); env && *env) return env;
  if (g.out) return *g.out;
  return "traverse-lab-out";
}

bool out_requested(const Globals& g) {
  const char* env = std::getenv("TRAVERSE_LAB_OUT");
  return (env && *env) || g.out;
}

void print_text(const tlab::Json& report, const std::filesystem::path& dir) {
  const auto& sc = report["scenario"];
  std::cout << sc["name"].get<std::string>() << " (" << sc["kind"].get<std::string>() << ", " << sc["hash"].get<std::string>()
            << ")\n";
  int failed = 0;
  for (const auto& c : report["claims"]) {
    const bool pass = c["pass"].get<bool>();
    failed += pass ? 0 : 1;
    std::cout << "  " << (pass ? "PASS" : "FAIL") << "  " << c["module"].get<std::string>() << "/"
              << c["claim"].get<std::string>() << "\n";
  }
  if (report.contains("error")) std::cout << "  ERROR " << report["error"]["message"].get<std::string>() << "\n";
  std::cout << "  " << report["claims"].size() << " claims, " << failed << " failed; output in " << dir.string() << "\n";
}

int run_scenarios(const std::vector<tlab::Scenario>& scenarios, const Globals& g) {
  const auto root = out_root(g);
  std::vector<tlab::RunResult> results(scenarios.size());
  // Scenario-level parallelism; a single scenario gets the jobs itself.
  const unsigned inner = scenarios.size() > 1 ? 1u : g.jobs;
  tlab::parallel_for(scenarios.size(), scenarios.size() > 1 ? g.jobs : 1u, [&](std::size_t i) {
    tlab::RunOptions o;
    o.out = root / scenarios[i].name;
    o.jobs = inner;
    o.seed = g.seed;
    results[i] = tlab::run_scenario(scenarios[i], o);
  });
  int code = 0;
  tlab::Json all = tlab::Json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    code = std::max(code, results[i].exit_code);
    if (g.json) all.push_back(results[i].report);
    else print_text(results[i].report, root / scenarios[i].name);
  }
  if (g.json) std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return code;
}

int selftest(const Globals& g, double graze_scale) {
  tlab::AcceptanceOptions o;
  o.jobs = g.jobs;
  o.graze_scale = graze_scale;
  o.seed = g.seed.value_or(0);
  auto results = tlab::run_acceptance(o, [&](const tlab::CriterionResult& r) {
    if (!g.json) std::cout << tlab::format_line(r) << std::endl;
  });
  bool pass = true;
  tlab::Json summary = tlab::Json::array();
  for (const auto& r : results) {
    pass = pass && r.pass;
    summary.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"seconds", r.seconds},
                       {"limit", r.limit},
                       {"detail", r.detail}});
  }
  tlab::Json doc = {{"graze_scale", graze_scale}, {"criteria", summary}, {"pass", pass}};
  if (g.json) std::cout << doc.dump(2) << "\n";
  else std::cout << (pass ? "all criteria passed" : "acceptance failed") << "\n";
  if (out_requested(g)) {
    std::filesystem::create_directories(out_root(g));
    std::ofstream(out_root(g) / "selftest.json") << doc.dump(2) << "\n";
  }
  return pass ? 0 : 3;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traversing flows, boundary causality maps and billiards"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Output directory (TRAVERSE_LAB_OUT overrides)");
  app.add_option("--seed", g.seed, "Seed for every random draw, overriding the scenario seed");
  app.add_option("--jobs", g.jobs, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", g.json, "Machine-readable output on stdout");
  app.fallthrough();

  std::vector<std::string> files;
  auto* run = app.add_subcommand("run", "Run scenario files");
  run->add_option("files", files, "Scenario TOML files or built-in scenario names")->required();

  double graze_scale = 1.0;
  auto* self = app.add_subcommand("selftest", "Run the acceptance suite on the built-in scenarios");
  self->add_option("--graze-scale", graze_scale, "Multiply the graze tolerance (sensitivity probe)")
      ->check(CLI::PositiveNumber);

  int max_reduced = 2, max_support = 5;
  auto* poset = app.add_subcommand("poset", "List admissible multiplicity words");
  poset->add_option("--max-reduced-norm", max_reduced)->check(CLI::NonNegativeNumber);
  poset->add_option("--max-support", max_support)->check(CLI::PositiveNumber);

  std::string word = "2";
  std::vector<double> centres{0.0};
  double box_radius = 1.0;
  int chain_samples = 1000, table_samples = 21;
  std::string model_file;
  auto* local = app.add_subcommand("local-model", "Check a polynomial local model");
  local->add_option("file", model_file, "Local model scenario file");
  local->add_option("--word", word, "Multiplicity word, e.g. 121");
  local->add_option("--centres", centres, "Root cluster centres")->delimiter(',');
  local->add_option("--box-radius", box_radius)->check(CLI::PositiveNumber);
  local->add_option("--samples", chain_samples, "Sampled coefficient vectors")->check(CLI::PositiveNumber);
  local->add_option("--table-samples", table_samples)->check(CLI::PositiveNumber);

  double outer = 1.0;
  std::optional<double> inner;
  int iterations = 100, poncelet_k = 0;
  std::size_t census = 0;
  std::string billiard_file;
  auto* billiard = app.add_subcommand("billiard", "Billiards in a disk or a concentric shell");
  billiard->add_option("file", billiard_file, "Billiard scenario file");
  billiard->add_option("--radius", outer, "Outer radius")->check(CLI::PositiveNumber);
  billiard->add_option("--inner", inner, "Inner obstacle radius")->check(CLI::PositiveNumber);
  billiard->add_option("--iterations", iterations)->check(CLI::PositiveNumber);
  billiard->add_option("--census", census, "Random lines for the tangency census");
  billiard->add_option("--poncelet-k", poncelet_k, "Poncelet period to check (needs --inner)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto load = [](const std::string& f) {
      if (std::filesystem::exists(f)) return tlab::load_scenario(f);
      if (f.find('/') == std::string::npos && f.find('.') == std::string::npos) return tlab::builtin_scenario(f);
      throw tlab::Error(tlab::ErrorCode::Config, f + ": no such file");
    };
    if (*run) {
      std::vector<tlab::Scenario> scenarios;
      for (const auto& f : files) scenarios.push_back(load(f));
      return run_scenarios(scenarios, g);
    }
    if (*self) return selftest(g, graze_scale);
    if (*poset) {
      std::ostringstream toml;
      toml << "name = \"poset\"\nkind = \"poset\"\n[poset]\nmax_reduced_norm = " << max_reduced
           << "\nmax_support = " << max_support << "\n";
      const auto s = tlab::parse_scenario(toml.str(), "poset");
      if (g.json) return run_scenarios({s}, g);
      tlab::RunOptions o;
      o.out = out_root(g) / s.name;
      const auto r = tlab::run_scenario(s, o);
      for (const auto& w : r.report["summary"]["words"])
        std::printf("(%s)  norm %d  reduced %d  flip %d\n", w["word"].get<std::string>().c_str(), w["norm"].get<int>(),
                    w["reduced_norm"].get<int>(), w["flip_exponent"].get<int>());
      std::printf("%zu words\n", r.report["summary"]["words"].size());
      return r.exit_code;
    }
    if (*local) {
      if (!model_file.empty()) return run_scenarios({load(model_file)}, g);
      std::ostringstream toml;
      toml << "name = \"local_model\"\nkind = \"local_model\"\n[model]\nword = \"" << word << "\"\ncentres = ["
           << join(centres) << "]\nbox_radius = " << box_radius << "\n[chain_law]\nsamples = " << chain_samples
           << "\n[table]\nsamples = " << table_samples << "\n";
      return run_scenarios({tlab::parse_scenario(toml.str(), "local-model")}, g);
    }
    if (*billiard) {
      if (!billiard_file.empty()) return run_scenarios({load(billiard_file)}, g);
      std::ostringstream toml;
      toml.precision(17);
      toml << "name = \"billiard\"\nkind = \"billiard\"\n[[table.curve]]\ntype = \"circle\"\ncentre = [0.0, 0.0]\nradius = "
           << outer << "\n";
      if (inner) toml << "[[table.curve]]\ntype = \"circle\"\ncentre = [0.0, 0.0]\nradius = " << *inner << "\n";
      toml << "[orbit]\nstart = [" << -outer << ", 0.0]\ndirection = [0.8, 0.6]\niterations = " << iterations << "\n";
      if (census) toml << "[census]\nlines = " << census << "\n";
      if (poncelet_k) {
        if (!inner) throw tlab::Error(tlab::ErrorCode::Config, "--poncelet-k needs --inner");
        toml << "[poncelet]\nk = " << poncelet_k << "\nouter = { centre = [0.0, 0.0], axes = [" << outer << ", " << outer
             << "] }\ninner = { centre = [0.0, 0.0], axes = [" << *inner << ", " << *inner << "] }\n";
      }
      return run_scenarios({tlab::parse_scenario(toml.str(), "billiard")}, g);
    }
  } catch (const tlab::Error& e) {
    std::cerr << "traverse-lab: " << e.what() << "\n";
    return e.code() == tlab::ErrorCode::Config ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "traverse-lab: internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
