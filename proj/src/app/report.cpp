#include "tlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "checks.hpp"
#include "oracles.hpp"
#include "svg.hpp"
#include "tlab/error.hpp"
#include "tlab/holography.hpp"

namespace tlab {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json point_json(const BoundaryPoint& p) {
  return Json{{"component", p.component}, {"s", p.s}, {"x", p.point.x}, {"y", p.point.y}};
}

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

class Run {
public:
  Run(const Scenario& s, const RunOptions& o) : s_(s), o_(o) {
    report_["scenario"] = {{"name", s.name}, {"kind", to_string(s.kind)}, {"hash", s.hash}, {"seed", seed()}};
    report_["claims"] = Json::array();
    report_["summary"] = Json::object();
    report_["artifacts"] = Json::array();
    if (o.out) std::filesystem::create_directories(*o.out);
  }

  std::uint64_t seed() const { return o_.seed.value_or(s_.seed); }
  unsigned jobs() const { return o_.jobs; }
  Json& summary() { return report_["summary"]; }

  void claim(const char* module, const char* name, bool pass, Json value, Json expected) {
    report_["claims"].push_back({{"module", module},
                                 {"claim", name},
                                 {"scenario", s_.name},
                                 {"hash", s_.hash},
                                 {"pass", pass},
                                 {"value", std::move(value)},
                                 {"expected", std::move(expected)}});
    pass_ = pass_ && pass;
  }

  bool tables() const { return o_.out && s_.tables; }
  bool figures() const { return o_.out && s_.figures; }

  void write(const std::string& name, const std::string& content) {
    if (!o_.out) return;
    std::ofstream f(*o_.out / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (*o_.out / name).string());
    f << content;
    report_["artifacts"].push_back(name);
  }

  RunResult finish(const Error* error) {
    if (error) {
      report_["error"] = {{"code", std::string(to_string(error->code()))}, {"message", error->what()}};
      pass_ = false;
    }
    report_["pass"] = pass_;
    if (o_.out) {
      std::ofstream f(*o_.out / "report.json", std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + (*o_.out / "report.json").string());
      f << report_.dump(2) << "\n";
    }
    return {report_, pass_, pass_ ? 0 : 3};
  }

private:
  const Scenario& s_;
  const RunOptions& o_;
  Json report_;
  bool pass_ = true;
};

std::string table_csv(const CausalityTable& t) {
  std::string out =
      "kind,entry_component,entry_s,entry_x,entry_y,entry_j,entry_sign,fixed,image_component,image_s,image_x,image_y,"
      "image_multiplicity,transit_time,word,f_entry,f_image\n";
  for (const auto& r : t.rows) {
    out += to_string(r.kind) + "," + std::to_string(r.entry.component) + "," + g17(r.entry.s) + "," +
           g17(r.entry.point.x) + "," + g17(r.entry.point.y) + "," + std::to_string(r.entry.stratum.j) + "," +
           std::to_string(r.entry.stratum.sign) + "," + (r.fixed ? "1" : "0") + "," +
           std::to_string(r.image.component) + "," + g17(r.image.s) + "," + g17(r.image.point.x) + "," +
           g17(r.image.point.y) + "," + std::to_string(r.image_multiplicity) + "," + g17(r.transit_time) + "," +
           r.word.to_string() + "," + (r.f_entry ? g17(*r.f_entry) : "") + "," + (r.f_image ? g17(*r.f_image) : "") +
           "\n";
  }
  return out;
}

Json gv_json(const GvRecord& g) {
  Json arcs = Json::array(), blocks = Json::array(), jumps = Json::array();
  for (const auto& a : g.arcs)
    arcs.push_back({{"index", a.index},
                    {"component", a.arc.component},
                    {"s_begin", a.arc.s_begin},
                    {"s_end", a.arc.s_end},
                    {"sign", a.arc.sign},
                    {"whole", a.arc.whole}});
  for (const auto& b : g.blocks) {
    Json curve = Json::array();
    for (const auto& [s, t] : b.curve) curve.push_back({s, t});
    blocks.push_back({{"plus_arc", b.plus_arc}, {"minus_arc", b.minus_arc}, {"curve", std::move(curve)}});
  }
  for (const auto& d : g.discontinuities)
    jumps.push_back({{"plus_arc", d.plus_arc},
                     {"s_left", d.s_left},
                     {"s_right", d.s_right},
                     {"left_arc", d.left_arc},
                     {"right_arc", d.right_arc},
                     {"left_image", d.left_image},
                     {"right_image", d.right_image}});
  return {{"arcs", arcs}, {"blocks", blocks}, {"discontinuities", jumps}, {"total_variation", g.total_variation}};
}

Json graph_json(const TrajectoryGraph& g) {
  Json nodes = Json::array(), edges = Json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    Json w = Json::array();
    for (const auto& p : g.nodes[i].witnesses) w.push_back(point_json(p));
    nodes.push_back({{"id", i}, {"label", g.nodes[i].label.to_string()}, {"witnesses", w}});
  }
  for (const auto& e : g.edges) {
    Json w = Json::array();
    for (const auto& p : e.witnesses) w.push_back(point_json(p));
    edges.push_back({{"from", e.from}, {"to", e.to}, {"label", e.label.to_string()}, {"witnesses", w}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"euler_characteristic", g.euler_characteristic()}};
}

int count_label(const TrajectoryGraph& g, const OmegaWord& w) {
  return static_cast<int>(std::count_if(g.nodes.begin(), g.nodes.end(), [&](const auto& n) { return n.label == w; }));
}

std::string flow_figure(const Domain2D& d, const VectorField& v, const CausalityTable& t, const std::string& title) {
  Svg svg(d.box());
  std::vector<const TableRow*> samples;
  for (const auto& r : t.rows)
    if (r.kind == RowKind::Sample) samples.push_back(&r);
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 24);
  for (std::size_t i = stride / 2; i < samples.size(); i += stride) {
    Trajectory tr = trace_trajectory(d, v, samples[i]->entry);
    svg.polyline(tr.states, "#7a9cc6", 1.0);
  }
  for (const auto& c : d.boundary()) svg.polyline(c.samples(), "#222222", 2.0, true);
  for (const auto& p : t.strata.tangencies) svg.dot(p.point, 5.0, p.stratum.sign < 0 ? "#c0392b" : "#2471a3");
  svg.title(title);
  return svg.str();
}

void run_flow(Run& run, const Scenario& s) {
  const FlowSpec& f = *s.flow;
  Domain2D d(Expr::parse(f.w), f.box, f.boundary_samples);
  d.set_graze_scale(f.graze_scale);
  const VectorField v = VectorField::parse(f.vx, f.vy);

  TraversingReport trav = check_traversing(d, v, 100);
  run.claim("flow_sim", "traversing", trav.pass, {{"checked", trav.checked}, {"failures", strings(trav.failures)}},
            "every interior point reaches the boundary both ways");

  TableOptions opts;
  opts.samples = f.samples;
  opts.jobs = run.jobs();
  if (f.height) opts.height = Expr::parse(*f.height);
  const CausalityTable t = compute_table(d, v, opts);
  const CausalityTable m = mirror_table(d, v, opts);

  FixedPointCheck fixed = check_fixed_points(d, v, t);
  run.claim("causality", "fixed_points", fixed.pass,
            {{"fixed_rows", fixed.fixed_rows},
             {"singleton_tangencies", fixed.singleton_tangencies},
             {"detected", fixed.detected},
             {"min_displacement", fixed.min_displacement},
             {"failures", strings(fixed.failures)}},
            "C(x) = x exactly on the (2,-) points, |C(x) - x| > 1e-6 elsewhere");

  const bool acyclic = reachability_acyclic(t);
  run.claim("causality", "acyclic", acyclic, acyclic, true);

  SemicontinuityReport semi = check_semicontinuity(d, v, t);
  run.claim("causality", "semicontinuity", semi.pass,
            {{"pairs", semi.pairs},
             {"discontinuities", semi.discontinuities},
             {"worst_gain", semi.worst_gain},
             {"worst_discontinuity", semi.worst_discontinuity},
             {"failures", strings(semi.failures)}},
            "gain >= -1e-9 on every row, one-sided limits within 1e-6");

  MirrorCheck mir = check_mirror(d, v, t, run.jobs());
  run.claim("causality", "mirror_inversion", mir.worst_distance <= 1e-6,
            {{"pairs", mir.pairs}, {"worst_distance", mir.worst_distance}}, "<= 1e-6");
  run.claim("causality", "word_mirroring", mir.word_mismatches == 0,
            {{"pairs", mir.pairs}, {"mismatches", mir.word_mismatches}}, 0);

  const int chi = euler_characteristic(t);
  const TrajectoryGraph g = build_trajectory_graph(t);
  if (f.expect_euler) run.claim("holography", "euler_characteristic", chi == *f.expect_euler, chi, *f.expect_euler);
  run.claim("holography", "graph_euler_characteristic", chi == g.euler_characteristic(), g.euler_characteristic(), chi);
  const int singletons = count_label(g, OmegaWord{2});
  const int junctions = count_label(g, OmegaWord{1, 2, 1});
  if (f.expect_singletons)
    run.claim("holography", "singleton_nodes", singletons == *f.expect_singletons, singletons, *f.expect_singletons);
  if (f.expect_junctions)
    run.claim("holography", "junction_nodes", junctions == *f.expect_junctions, junctions, *f.expect_junctions);

  Json tangencies = Json::array();
  bool tangency_ok = true;
  for (const auto& e : detect_tangency_chains(t)) {
    Stratum st = classify_boundary_point(d, v, e.point.point);
    const bool ok = st.j == e.multiplicity && st.sign == e.sign;
    tangency_ok = tangency_ok && ok;
    tangencies.push_back({{"point", point_json(e.point)},
                          {"multiplicity", e.multiplicity},
                          {"sign", e.sign},
                          {"chain_word", e.chain_word.to_string()},
                          {"classified", to_string(st)}});
  }
  run.claim("holography", "tangency_multiplicity", tangency_ok, tangencies,
            "chain multiplicity equals the flow-derivative stratum");

  const TrajectoryGraph interior = interior_graph(d, v, f.interior_grid);
  const Isomorphism iso = graph_isomorphic(g, interior);
  run.claim("holography", "interior_isomorphism", iso.found, {{"mapping", iso.mapping}},
            "boundary graph label-isomorphic to the interior graph");
  auto degree_failures = check_degrees(g);
  run.claim("holography", "degrees", degree_failures.empty(), strings(degree_failures), Json::array());
  const TrajectoryGraph back = build_trajectory_graph(m);
  const bool rev = graph_isomorphic(back, reversed(g), true).found;
  run.claim("holography", "reversal", rev, rev, true);

  run.summary() = {{"components", d.boundary().size()},
                   {"rows", t.rows.size()},
                   {"tangencies", t.strata.tangencies.size()},
                   {"euler_characteristic", chi},
                   {"nodes", g.nodes.size()},
                   {"edges", g.edges.size()}};

  if (run.tables()) {
    run.write("table.csv", table_csv(t));
    run.write("gv.json", gv_json(export_gv(t)).dump(1) + "\n");
    run.write("graph.dot", graph_dot(g));
    run.write("graph.json", graph_json(g).dump(1) + "\n");
    run.write("interior_graph.dot", graph_dot(interior, "interior"));
    run.write("reachability.dot", reachability_dot(t));
  }
  if (run.figures()) run.write("figure.svg", flow_figure(d, v, t, s.name + "  chi = " + std::to_string(chi)));
}

std::vector<Vec2> random_starts(const Conic& outer, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) out.push_back(outer.point_at(angle(rng)));
  return out;
}

std::vector<Vec2> conic_points(const Conic& c) {
  std::vector<Vec2> out;
  for (int i = 0; i < 256; ++i) out.push_back(c.point_at(2.0 * std::numbers::pi * i / 256.0));
  return out;
}

void run_billiard(Run& run, const Scenario& s) {
  const BilliardSpec& b = *s.billiard;
  const BilliardTable table = build_table(b);
  std::mt19937_64 rng(run.seed());

  Svg svg(table.curve(0).box());
  for (const auto& c : table.curves()) svg.polyline(c.param().samples(), "#222222", 2.0, true);

  if (b.orbit) {
    const OrbitSpec& o = *b.orbit;
    UnitState st = make_state(table, o.curve, o.start, normalized(o.direction));
    std::string csv = "step,curve,s,x,y,dx,dy,normal,tangential\n";
    std::vector<Vec2> path{st.point};
    bool inward = true, involution = true;
    const double t0 = st.tangential;
    double drift = 0.0;
    for (int i = 0;; ++i) {
      const Vec2 u = st.direction();
      csv += std::to_string(i) + "," + std::to_string(st.curve) + "," + g17(st.s) + "," + g17(st.point.x) + "," +
             g17(st.point.y) + "," + g17(u.x) + "," + g17(u.y) + "," + g17(st.normal) + "," + g17(st.tangential) +
             "\n";
      inward = inward && heading(st) == Heading::Inward;
      const UnitState twice = tau(tau(st));
      involution = involution && twice.normal == st.normal && twice.tangential == st.tangential;
      drift = std::max(drift, std::fabs(std::fabs(st.tangential) - std::fabs(t0)));
      if (i == o.iterations) break;
      st = billiard_map(table, st);
      path.push_back(st.point);
    }
    run.claim("billiards", "orbit_inward", inward, o.iterations, "every iterate points into the table");
    run.claim("billiards", "tau_involution", involution, involution, true);
    if (table.curves().size() == 1 && table.curve(0).shape() == TableCurve::Shape::Circle)
      run.claim("billiards", "circle_angle_conserved", drift <= 1e-9, drift, "<= 1e-9");
    if (run.tables()) run.write("orbit.csv", csv);
    svg.polyline(path, "#2471a3", 1.0);
    run.summary()["orbit_iterations"] = o.iterations;
  }

  if (b.census_lines > 0) {
    const auto lines = random_lines(table, b.census_lines, rng);
    const TangencyCensus c = tangency_census(table, lines);
    Json mult = Json::object(), reduced = Json::object();
    for (const auto& [k, n] : c.multiplicity) mult[std::to_string(k)] = n;
    for (const auto& [k, n] : c.reduced_multiplicity) reduced[std::to_string(k)] = n;
    Json value = {{"lines", c.lines},
                  {"chords", c.chords},
                  {"max_multiplicity", c.max_multiplicity},
                  {"max_reduced", c.max_reduced},
                  {"violations", c.violations},
                  {"multiplicity", mult},
                  {"reduced_multiplicity", reduced}};
    run.claim("billiards", "tangency_bound", c.violations == 0 && c.max_reduced <= 2, value,
              "reduced multiplicity <= 2 on every chord");
    if (run.tables()) run.write("census.json", value.dump(1) + "\n");
  }

  if (b.poncelet) {
    const PonceletSpec& p = *b.poncelet;
    const Conic inner = p.inner ? *p.inner : confocal_closure(p.outer, p.k);
    const auto starts = random_starts(p.outer, p.starts, rng);
    const PonceletReport closing = poncelet_check(p.outer, inner, p.k, starts);
    run.claim("billiards", "poncelet_closure", closing.worst <= 1e-6,
              {{"k", p.k}, {"starts", p.starts}, {"worst_residual", closing.worst}}, "<= 1e-6");
    std::string csv = "k,start_x,start_y,residual,winding\n";
    auto rows = [&](const PonceletReport& r) {
      for (std::size_t i = 0; i < r.starts.size(); ++i)
        csv += std::to_string(r.k) + "," + g17(r.starts[i].x) + "," + g17(r.starts[i].y) + "," + g17(r.residuals[i]) +
               "," + g17(r.winding[i]) + "\n";
    };
    rows(closing);
    if (p.reject_k) {
      const PonceletReport open = poncelet_check(p.outer, inner, *p.reject_k, starts);
      const double least = *std::min_element(open.residuals.begin(), open.residuals.end());
      run.claim("billiards", "poncelet_other_period_open", least >= 0.1,
                {{"k", *p.reject_k}, {"least_residual", least}}, ">= 0.1");
      rows(open);
    }
    if (run.tables()) run.write("poncelet.csv", csv);
    svg.polyline(conic_points(p.outer), "#999999", 1.0, true);
    svg.polyline(conic_points(inner), "#999999", 1.0, true);
    std::vector<Vec2> polygon{starts.front()};
    for (int i = 0; i < p.k; ++i) polygon.push_back(poncelet_step(p.outer, inner, polygon.back()));
    svg.polyline(polygon, "#c0392b", 1.5);
    run.summary()["poncelet_inner"] = {{"centre", {inner.centre.x, inner.centre.y}}, {"axes", {inner.a, inner.b}}};
  }
  run.summary()["curves"] = table.curves().size();
  run.summary()["diameter"] = table.diameter();
  svg.title(s.name);
  if (run.figures()) run.write("figure.svg", svg.str());
}

void run_local_model(Run& run, const LocalModelSpec& spec) {
  const LocalModel model(spec.word, spec.centres, spec.box_radius);
  const ChainLawCheck chain = check_chain_law(model, spec.chain_samples, run.seed());
  run.claim("local_model", "chain_law", chain.pass,
            {{"samples", chain.samples}, {"skipped", chain.skipped}, {"longest", chain.longest}},
            chain.exact ? Json(chain.expected) : Json("<= " + std::to_string(chain.expected)));
  const ModelFixedCheck fixed = check_model_fixed_points(model, spec.chain_samples, run.seed() + 1);
  run.claim("local_model", "fixed_points", fixed.pass,
            {{"fibers", fixed.fibers},
             {"points", fixed.points},
             {"fixed", fixed.fixed},
             {"unresolved_fibers", fixed.unresolved},
             {"min_displacement", fixed.min_displacement},
             {"failures", strings(fixed.failures)}},
            "fixed exactly at even atoms, |C(u) - u| > 1e-6 elsewhere");
  run.summary() = {{"word", spec.word.to_string()}, {"dimension", model.dimension()}};

  if (model.dimension() > 1) return;
  const CausalityTable t = local_model_table(model, spec.table_samples);
  bool ok = true;
  Json found = Json::array();
  for (const auto& e : detect_fixed_points(t)) {
    ok = ok && e.point.stratum.j % 2 == 0 && e.point.stratum.sign == -1;
    found.push_back(point_json(e.point));
  }
  run.claim("holography", "table_fixed_points", ok, found, "every detected fixed point is an even atom");
  ok = true;
  Json junctions = Json::array();
  for (const auto& e : detect_tangency_chains(t)) {
    const int expected = spec.word[static_cast<std::size_t>(e.point.component)];
    ok = ok && e.multiplicity == expected;
    junctions.push_back({{"point", point_json(e.point)}, {"multiplicity", e.multiplicity}, {"expected", expected}});
  }
  run.claim("holography", "table_multiplicities", ok, junctions, "chain multiplicity equals the word entry");
  if (run.tables()) run.write("table.csv", table_csv(t));
}

void run_poset(Run& run, const PosetSpec& spec) {
  const auto words = enumerate_admissible(spec.max_reduced_norm, spec.max_support);
  Json list = Json::array();
  std::string csv = "word,norm,reduced_norm,flip_exponent,mirror\n";
  std::vector<std::string> mismatches;
  bool mirrors = true;
  for (const auto& w : words) {
    const int e = flip_sign_exponent(w);
    if (e != oracle::brute_force_flip_exponent(w)) mismatches.push_back(w.to_string());
    const OmegaWord mw = mirror(w);
    mirrors = mirrors && mirror(mw) == w && is_admissible(mw);
    list.push_back({{"word", w.to_string()},
                    {"norm", norm(w)},
                    {"reduced_norm", reduced_norm(w)},
                    {"flip_exponent", e},
                    {"mirror", mw.to_string()}});
    csv += "\"" + w.to_string() + "\"," + std::to_string(norm(w)) + "," + std::to_string(reduced_norm(w)) + "," +
           std::to_string(e) + ",\"" + mw.to_string() + "\"\n";
  }
  run.claim("omega", "flip_exponent_parity", mismatches.empty(), {{"words", words.size()}, {"mismatches", strings(mismatches)}},
            "matches the explicit permutation parity");
  run.claim("omega", "mirror_involution", mirrors, mirrors, true);
  run.summary() = {{"max_reduced_norm", spec.max_reduced_norm}, {"max_support", spec.max_support}, {"words", list}};
  if (run.tables()) run.write("words.csv", csv);
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  Run run(s, options);
  try {
    switch (s.kind) {
      case ScenarioKind::Flow: run_flow(run, s); break;
      case ScenarioKind::Billiard: run_billiard(run, s); break;
      case ScenarioKind::LocalModel: run_local_model(run, *s.local_model); break;
      case ScenarioKind::Poset: run_poset(run, *s.poset); break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    return run.finish(&e);
  }
  return run.finish(nullptr);
}

}  // namespace tlab
