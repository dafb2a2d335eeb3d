#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tlab/causality.hpp"
#include "tlab/error.hpp"

using tlab::CausalityTable;
using tlab::Domain2D;
using tlab::Expr;
using tlab::RowKind;
using tlab::Vec2;
using tlab::VectorField;

namespace {

const Domain2D& disk() {
  static const Domain2D d(Expr::parse("1 - x^2 - y^2"), {-1.5, 1.5, -1.5, 1.5});
  return d;
}

const Domain2D& annulus() {
  static const Domain2D d(Expr::parse("(4 - x^2 - y^2)*(x^2 + y^2 - 1)"), {-2.5, 2.5, -2.5, 2.5});
  return d;
}

VectorField east() { return VectorField::constant({1, 0}); }

tlab::TableOptions opts(int n) {
  tlab::TableOptions o;
  o.samples = n;
  o.jobs = 4;
  return o;
}

const CausalityTable& disk_table() {
  static const CausalityTable t = tlab::compute_table(disk(), east(), opts(64));
  return t;
}

const CausalityTable& annulus_table() {
  static const CausalityTable t = tlab::compute_table(annulus(), east(), opts(64));
  return t;
}

const tlab::TableRow* row_at(const Domain2D& d, const CausalityTable& t, Vec2 p, RowKind kind) {
  auto b = d.locate(p);
  for (const auto& r : t.rows)
    if (r.kind == kind && r.entry.component == b.component && tlab::distance(r.entry.point, p) < 1e-6) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("arc sample positions nest under doubling") {
  tlab::BoundaryArc arc{0, 1.0, 3.0, 1, false};
  auto a = tlab::arc_samples(arc, 8);
  auto b = tlab::arc_samples(arc, 16);
  CHECK(a.size() == 7);
  for (double s : a) CHECK(std::find(b.begin(), b.end(), s) != b.end());
  tlab::BoundaryArc whole{0, 0.0, 4.0, 1, true};
  CHECK(tlab::arc_samples(whole, 4) == std::vector<double>{0.0, 1.0, 2.0, 3.0});
}

TEST_CASE("disk rows") {
  const auto& t = disk_table();
  int fixed = 0;
  for (const auto& r : t.rows) {
    if (r.fixed) {
      ++fixed;
      CHECK(r.word == tlab::OmegaWord{2});
      continue;
    }
    CHECK(r.word == tlab::OmegaWord{1, 1});
    // Horizontal chords: the image mirrors the entry.
    CHECK(std::fabs(r.image.point.x + r.entry.point.x) < 1e-6);
    CHECK(std::fabs(r.image.point.y - r.entry.point.y) < 1e-6);
  }
  CHECK(fixed == 2);

  auto st = tlab::strata(disk(), east());
  // Row at (-0.6, 0.8) from a dedicated table whose samples hit it.
  auto p = disk().locate({-0.6, 0.8});
  tlab::TraceControls c;
  auto tr = tlab::trace_trajectory(disk(), east(), p, c);
  CHECK(tlab::distance(tr.divisor[1].point.point, {0.6, 0.8}) < 1e-6);
  auto f = row_at(disk(), t, {0, 1}, RowKind::Fixed);
  REQUIRE(f);
  CHECK(f->fixed);
  CHECK(tlab::distance(f->image.point, {0, 1}) < 1e-9);
}

TEST_CASE("annulus tangent and continuation rows") {
  const auto& t = annulus_table();
  const auto* tan = row_at(annulus(), t, {-std::sqrt(3.0), 1}, RowKind::Tangent);
  REQUIRE(tan);
  CHECK(tlab::distance(tan->image.point, {0, 1}) < 1e-6);
  CHECK(tan->image_multiplicity == 2);
  CHECK(tan->word == tlab::OmegaWord{1, 2, 1});
  const auto* cont = row_at(annulus(), t, {0, 1}, RowKind::Continuation);
  REQUIRE(cont);
  CHECK(tlab::distance(cont->image.point, {std::sqrt(3.0), 1}) < 1e-6);
  CHECK(cont->image_multiplicity == 1);
  CHECK(tlab::find_row(t, tan->entry.component, tan->entry.s) != nullptr);
}

TEST_CASE("chains") {
  auto dc = tlab::chains(disk_table());
  int singletons = 0;
  for (const auto& c : dc) {
    if (c.word == tlab::OmegaWord{2}) {
      ++singletons;
      CHECK(c.arrows() == 0);
    } else {
      CHECK(c.word == tlab::OmegaWord{1, 1});
      CHECK(c.arrows() == 1);
    }
  }
  CHECK(singletons == 2);

  int junctions = 0;
  for (const auto& c : tlab::chains(annulus_table())) {
    if (c.word == tlab::OmegaWord{1, 2, 1}) {
      ++junctions;
      CHECK(c.arrows() == 2);
    }
    CHECK(c.arrows() <= 2);
  }
  CHECK(junctions == 2);
  CHECK(tlab::reachability_acyclic(disk_table()));
  CHECK(tlab::reachability_acyclic(annulus_table()));
  CHECK(tlab::reachability_dot(annulus_table()).find("->") != std::string::npos);
}

TEST_CASE("mirror table inverts the map") {
  const auto& t = annulus_table();
  auto m = tlab::mirror_table(annulus(), east(), opts(64));
  CHECK(m.rows.size() == t.rows.size());
  int checked = 0;
  for (const auto& r : t.rows) {
    if (r.fixed || r.kind != RowKind::Sample || r.image_multiplicity != 1) continue;
    auto back = tlab::trace_trajectory(annulus(), east().negated(), r.image);
    CHECK(tlab::distance(back.divisor[1].point.point, r.entry.point) < 1e-6);
    CHECK(back.omega == tlab::mirror(r.word));
    ++checked;
  }
  CHECK(checked > 100);
  for (const auto& r : m.rows)
    if (r.kind == RowKind::Tangent) CHECK(r.word == tlab::OmegaWord{1, 2, 1});
}

TEST_CASE("gv blocks") {
  auto g = tlab::export_gv(disk_table());
  CHECK(g.arcs.size() == 2);
  REQUIRE(g.blocks.size() == 1);
  CHECK(g.blocks[0].plus_arc == 0);
  CHECK(g.blocks[0].minus_arc == 1);
  CHECK(g.discontinuities.empty());
  // Exit arc length traversed once: the disk map runs over half the circle.
  CHECK(g.total_variation == doctest::Approx(std::numbers::pi).epsilon(0.05));

  auto a = tlab::export_gv(annulus_table());
  CHECK(a.arcs.size() == 4);
  // Outer entry arc feeds both exit arcs, the hole's entry arc only the outer exit arc.
  CHECK(a.blocks.size() == 3);
  for (const auto& b : a.blocks) CHECK((b.plus_arc + b.minus_arc) % 2 == 1);
  for (const auto& ga : a.arcs) CHECK((ga.index % 2 == 0) == (ga.arc.sign > 0));
  // Jumps sit at the entries of the two trajectories tangent to the hole.
  CHECK(a.discontinuities.size() == 2);
  for (const auto& d : a.discontinuities) {
    Vec2 left = annulus().at(a.arcs[d.plus_arc].arc.component, a.arcs[d.plus_arc].arc.s_begin + d.s_left).point;
    CHECK(std::fabs(std::fabs(left.y) - 1.0) < 0.2);
  }
}

TEST_CASE("semicontinuity") {
  auto r = tlab::check_semicontinuity(disk(), east(), disk_table());
  CHECK(r.pass);
  CHECK(r.discontinuities == 0);
  auto a = tlab::check_semicontinuity(annulus(), east(), annulus_table());
  CHECK(a.pass);
  CHECK(a.discontinuities == 2);
  CHECK(a.worst_gain >= -1e-9);
  CHECK(a.worst_discontinuity >= -1e-6);
  MESSAGE("worst gain " << a.worst_gain << ", worst jump slack " << a.worst_discontinuity);
  auto w = VectorField::parse("1", "0.3*sin(x)");
  auto wt = tlab::compute_table(annulus(), w, opts(48));
  auto ws = tlab::check_semicontinuity(annulus(), w, wt);
  CHECK(ws.pass);
}

TEST_CASE("sample doubling keeps shared rows") {
  auto t1 = tlab::compute_table(annulus(), east(), opts(32));
  const auto& t2 = annulus_table();
  int shared = 0;
  for (const auto& r : t1.rows) {
    const auto* q = tlab::find_row(t2, r.entry.component, r.entry.s, 1e-12);
    REQUIRE(q);
    if (q->kind != r.kind) continue;
    CHECK(tlab::distance(q->image.point, r.image.point) < 1e-12);
    ++shared;
  }
  CHECK(shared == static_cast<int>(t1.rows.size()));
}

TEST_CASE("heights") {
  auto o = opts(16);
  o.height = Expr::parse("x");
  auto t = tlab::compute_table(disk(), east(), o);
  for (const auto& r : t.rows) {
    REQUIRE(r.f_entry);
    CHECK(*r.f_image >= *r.f_entry - 1e-12);
  }
  auto m = tlab::mirror_table(disk(), east(), o);
  for (const auto& r : m.rows) CHECK(*r.f_image >= *r.f_entry - 1e-12);
}
