#include "tlab/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "tlab/error.hpp"
#include "tlab/expr.hpp"

namespace tlab {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Flow: return "flow";
    case ScenarioKind::Billiard: return "billiard";
    case ScenarioKind::LocalModel: return "local_model";
    case ScenarioKind::Poset: return "poset";
  }
  return "?";
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, where + ": " + what);
}

class Section {
public:
  Section(const toml::table* t, std::string path) : t_(t), path_(std::move(path)) {}

  bool present() const { return t_ != nullptr; }
  const std::string& path() const { return path_; }

  void allow(std::initializer_list<std::string_view> keys) const {
    if (!t_) return;
    for (const auto& [k, v] : *t_)
      if (std::find(keys.begin(), keys.end(), k.str()) == keys.end())
        config_error(path_, "unknown key '" + std::string(k.str()) + "'");
  }

  Section sub(std::string_view key) const {
    const toml::node* n = t_ ? t_->get(key) : nullptr;
    if (n && !n->is_table()) config_error(name(key), "expected a table");
    return {n ? n->as_table() : nullptr, name(key)};
  }

  bool has(std::string_view key) const { return t_ && t_->contains(key); }

  std::string str(std::string_view key) const {
    auto v = node(key).value<std::string>();
    if (!v) config_error(name(key), "expected a string");
    return *v;
  }
  std::optional<std::string> opt_str(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return str(key);
  }
  double num(std::string_view key) const {
    const toml::node& n = node(key);
    if (auto d = n.value_exact<double>()) return *d;
    if (auto i = n.value_exact<std::int64_t>()) return static_cast<double>(*i);
    config_error(name(key), "expected a number");
  }
  double num_or(std::string_view key, double fallback) const { return has(key) ? num(key) : fallback; }
  std::int64_t integer(std::string_view key) const {
    auto v = node(key).value_exact<std::int64_t>();
    if (!v) config_error(name(key), "expected an integer");
    return *v;
  }
  std::int64_t int_or(std::string_view key, std::int64_t fallback) const { return has(key) ? integer(key) : fallback; }
  bool boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    auto v = node(key).value_exact<bool>();
    if (!v) config_error(name(key), "expected true or false");
    return *v;
  }
  std::vector<double> numbers(std::string_view key, std::size_t count = 0) const {
    const toml::array* a = node(key).as_array();
    if (!a) config_error(name(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *a) {
      if (auto d = e.value_exact<double>()) out.push_back(*d);
      else if (auto i = e.value_exact<std::int64_t>()) out.push_back(static_cast<double>(*i));
      else config_error(name(key), "expected an array of numbers");
    }
    if (count && out.size() != count) config_error(name(key), "expected " + std::to_string(count) + " numbers");
    return out;
  }
  Vec2 vec(std::string_view key) const {
    auto v = numbers(key, 2);
    return {v[0], v[1]};
  }
  Box box(std::string_view key) const {
    auto v = numbers(key, 4);
    if (!(v[0] < v[1] && v[2] < v[3])) config_error(name(key), "expected [xmin, xmax, ymin, ymax] with min < max");
    return {v[0], v[1], v[2], v[3]};
  }
  std::vector<Section> tables(std::string_view key) const {
    std::vector<Section> out;
    const toml::node* n = t_ ? t_->get(key) : nullptr;
    if (!n) return out;
    const toml::array* a = n->as_array();
    if (!a) config_error(name(key), "expected an array of tables");
    for (std::size_t i = 0; i < a->size(); ++i) {
      if (!(*a)[i].is_table()) config_error(name(key), "expected an array of tables");
      out.emplace_back((*a)[i].as_table(), name(key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

private:
  std::string name(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }
  const toml::node& node(std::string_view key) const {
    const toml::node* n = t_ ? t_->get(key) : nullptr;
    if (!n) config_error(name(key), "missing");
    return *n;
  }

  const toml::table* t_;
  std::string path_;
};

void check_expr(const std::string& where, const std::string& source) {
  try {
    (void)Expr::parse(source);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
}

int positive(const Section& s, std::string_view key, std::int64_t fallback, std::int64_t min = 1) {
  std::int64_t v = s.int_or(key, fallback);
  if (v < min || v > 100000000) config_error(s.path() + "." + std::string(key), "out of range");
  return static_cast<int>(v);
}

FlowSpec parse_flow(const Section& root) {
  root.allow({"name", "kind", "seed", "domain", "field", "causality", "holography", "tolerances", "expect", "output"});
  FlowSpec f;
  Section domain = root.sub("domain");
  if (!domain.present()) config_error("domain", "missing");
  domain.allow({"w", "box", "boundary_samples"});
  f.w = domain.str("w");
  check_expr("domain.w", f.w);
  f.box = domain.box("box");
  f.boundary_samples = positive(domain, "boundary_samples", 2048, 64);

  Section field = root.sub("field");
  if (!field.present()) config_error("field", "missing");
  field.allow({"vx", "vy"});
  f.vx = field.str("vx");
  f.vy = field.str("vy");
  check_expr("field.vx", f.vx);
  check_expr("field.vy", f.vy);

  Section causality = root.sub("causality");
  causality.allow({"samples", "height"});
  f.samples = positive(causality, "samples", 2048, 2);
  f.height = causality.opt_str("height");
  if (f.height) check_expr("causality.height", *f.height);

  Section holo = root.sub("holography");
  holo.allow({"interior_grid"});
  f.interior_grid = positive(holo, "interior_grid", 320, 16);

  Section tol = root.sub("tolerances");
  tol.allow({"graze_scale"});
  f.graze_scale = tol.num_or("graze_scale", 1.0);
  if (!(f.graze_scale > 0.0)) config_error("tolerances.graze_scale", "must be positive");

  Section expect = root.sub("expect");
  expect.allow({"euler", "junctions", "singletons"});
  if (expect.has("euler")) f.expect_euler = static_cast<int>(expect.integer("euler"));
  if (expect.has("junctions")) f.expect_junctions = static_cast<int>(expect.integer("junctions"));
  if (expect.has("singletons")) f.expect_singletons = static_cast<int>(expect.integer("singletons"));
  return f;
}

Conic parse_conic(const Section& s) {
  s.allow({"centre", "axes"});
  auto axes = s.numbers("axes", 2);
  if (!(axes[0] > 0.0 && axes[1] > 0.0)) config_error(s.path() + ".axes", "must be positive");
  return {s.vec("centre"), axes[0], axes[1]};
}

BilliardSpec parse_billiard(const Section& root) {
  root.allow({"name", "kind", "seed", "table", "orbit", "census", "poncelet", "output"});
  BilliardSpec b;
  Section table = root.sub("table");
  table.allow({"curve"});
  for (const Section& c : table.tables("curve")) {
    c.allow({"type", "centre", "radius", "axes", "g", "box"});
    CurveSpec cs;
    cs.type = c.str("type");
    if (cs.type == "circle") {
      cs.centre = c.vec("centre");
      cs.radius = c.num("radius");
    } else if (cs.type == "ellipse") {
      cs.centre = c.vec("centre");
      auto axes = c.numbers("axes", 2);
      cs.a = axes[0];
      cs.b = axes[1];
    } else if (cs.type == "implicit") {
      cs.g = c.str("g");
      check_expr(c.path() + ".g", cs.g);
      cs.box = c.box("box");
    } else {
      config_error(c.path() + ".type", "expected circle, ellipse or implicit");
    }
    b.curves.push_back(cs);
  }
  if (b.curves.empty()) config_error("table.curve", "at least one curve is required");

  Section orbit = root.sub("orbit");
  if (orbit.present()) {
    orbit.allow({"curve", "start", "direction", "iterations"});
    OrbitSpec o;
    o.curve = static_cast<int>(orbit.int_or("curve", 0));
    if (o.curve < 0 || o.curve >= static_cast<int>(b.curves.size())) config_error("orbit.curve", "no such curve");
    o.start = orbit.vec("start");
    o.direction = orbit.vec("direction");
    o.iterations = positive(orbit, "iterations", 100);
    b.orbit = o;
  }
  Section census = root.sub("census");
  census.allow({"lines"});
  b.census_lines = static_cast<std::size_t>(positive(census, "lines", 0, 0));

  Section pon = root.sub("poncelet");
  if (pon.present()) {
    pon.allow({"outer", "inner", "k", "starts", "reject_k"});
    PonceletSpec p;
    p.outer = parse_conic(pon.sub("outer"));
    if (pon.has("inner")) p.inner = parse_conic(pon.sub("inner"));
    p.k = positive(pon, "k", 3);
    p.starts = positive(pon, "starts", 10);
    if (pon.has("reject_k")) p.reject_k = positive(pon, "reject_k", 4);
    b.poncelet = p;
  }
  return b;
}

LocalModelSpec parse_local_model(const Section& root) {
  root.allow({"name", "kind", "seed", "model", "chain_law", "table", "output"});
  LocalModelSpec m;
  Section model = root.sub("model");
  model.allow({"word", "centres", "box_radius"});
  try {
    m.word = OmegaWord::parse(model.str("word"));
  } catch (const Error& e) {
    config_error("model.word", e.what());
  }
  m.centres = model.numbers("centres");
  if (m.centres.size() != m.word.size()) config_error("model.centres", "one centre per word entry");
  m.box_radius = model.num("box_radius");
  Section chain = root.sub("chain_law");
  chain.allow({"samples"});
  m.chain_samples = positive(chain, "samples", 1000, 0);
  Section table = root.sub("table");
  table.allow({"samples"});
  m.table_samples = positive(table, "samples", 21);
  return m;
}

PosetSpec parse_poset(const Section& root) {
  root.allow({"name", "kind", "seed", "poset", "output"});
  Section p = root.sub("poset");
  p.allow({"max_reduced_norm", "max_support"});
  PosetSpec s;
  s.max_reduced_norm = positive(p, "max_reduced_norm", 2, 0);
  s.max_support = positive(p, "max_support", 5);
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  toml::table doc;
  try {
    doc = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line << ", column " << e.source().begin.column;
    config_error(std::string(origin), msg.str());
  }
  Section root(&doc, "");
  Scenario s;
  s.hash = fnv1a_hex(text);
  s.name = root.str("name");
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos)
    config_error("name", "must be non-empty without spaces or slashes");
  std::int64_t seed = root.int_or("seed", 0);
  if (seed < 0) config_error("seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  Section output = root.sub("output");
  output.allow({"figures", "tables"});
  s.figures = output.boolean_or("figures", true);
  s.tables = output.boolean_or("tables", true);

  const std::string kind = root.str("kind");
  if (kind == "flow") {
    s.kind = ScenarioKind::Flow;
    s.flow = parse_flow(root);
  } else if (kind == "billiard") {
    s.kind = ScenarioKind::Billiard;
    s.billiard = parse_billiard(root);
  } else if (kind == "local_model") {
    s.kind = ScenarioKind::LocalModel;
    s.local_model = parse_local_model(root);
  } else if (kind == "poset") {
    s.kind = ScenarioKind::Poset;
    s.poset = parse_poset(root);
  } else {
    config_error("kind", "expected flow, billiard, local_model or poset");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, path.string() + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

BilliardTable build_table(const BilliardSpec& spec) {
  std::vector<TableCurve> curves;
  for (const auto& c : spec.curves) {
    if (c.type == "circle") curves.push_back(TableCurve::circle(c.centre, c.radius));
    else if (c.type == "ellipse") curves.push_back(TableCurve::ellipse(c.centre, c.a, c.b));
    else curves.push_back(TableCurve::implicit(Expr::parse(c.g), c.box));
  }
  return BilliardTable(std::move(curves));
}

Scenario builtin_scenario(std::string_view name) {
  for (const auto& b : builtin_scenarios()) {
    std::string_view stem = b.file.substr(0, b.file.rfind('.'));
    if (stem == name) return parse_scenario(b.text, b.file);
  }
  throw Error(ErrorCode::Config, "no built-in scenario named " + std::string(name));
}

}  // namespace tlab
