#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tlab/error.hpp"
#include "tlab/holography.hpp"

using tlab::CausalityTable;
using tlab::Domain2D;
using tlab::Expr;
using tlab::OmegaWord;
using tlab::Vec2;
using tlab::VectorField;

namespace {

struct Scene {
  Domain2D domain;
  VectorField field;
};

const Scene& disk() {
  static const Scene s{Domain2D(Expr::parse("1 - x^2 - y^2"), {-1.5, 1.5, -1.5, 1.5}), VectorField::constant({1, 0})};
  return s;
}

const Scene& annulus() {
  static const Scene s{Domain2D(Expr::parse("(4 - x^2 - y^2)*(x^2 + y^2 - 1)"), {-2.5, 2.5, -2.5, 2.5}),
                       VectorField::constant({1, 0})};
  return s;
}

const Scene& blob() {
  static const Scene s{
      Domain2D(Expr::parse("(1 - (x/2)^2 - (y/1.3)^2 - 0.1*x*y) * ((x - 0.45)^2 + 1.6*(y - 0.15)^2 - 0.16)"),
               {-2.6, 2.6, -2.6, 2.6}),
      VectorField::parse("1", "0.3*sin(1.3*x)")};
  return s;
}

CausalityTable table(const Scene& s, int n = 256) {
  tlab::TableOptions o;
  o.samples = n;
  o.jobs = 4;
  return tlab::compute_table(s.domain, s.field, o);
}

int count(const tlab::TrajectoryGraph& g, const OmegaWord& w) {
  return static_cast<int>(std::count_if(g.nodes.begin(), g.nodes.end(), [&](const auto& n) { return n.label == w; }));
}

}  // namespace

TEST_CASE("fixed points") {
  auto f = tlab::detect_fixed_points(table(disk()));
  REQUIRE(f.size() == 2);
  for (const auto& p : f) {
    CHECK(std::fabs(p.point.point.x) < 2 * std::numbers::pi / 256);
    CHECK(std::fabs(std::fabs(p.point.point.y) - 1.0) < 1e-6);
  }
  auto a = tlab::detect_fixed_points(table(annulus()));
  REQUIRE(a.size() == 2);
  for (const auto& p : a) CHECK(std::fabs(std::fabs(p.point.point.y) - 2.0) < 1e-6);

  tlab::LocalModel plain(OmegaWord{1, 1}, {-1, 1}, 0.1);
  CHECK(tlab::detect_fixed_points(tlab::local_model_table(plain, 5)).empty());
}

TEST_CASE("tangency chains") {
  CHECK(tlab::detect_tangency_chains(table(disk())).empty());
  auto a = tlab::detect_tangency_chains(table(annulus()));
  REQUIRE(a.size() == 2);
  for (const auto& t : a) {
    CHECK(t.multiplicity == 2);
    CHECK(t.sign == 1);
    CHECK(t.chain_word == OmegaWord{1, 2, 1});
    CHECK(std::fabs(t.point.point.x) < 1e-9);
    CHECK(std::fabs(std::fabs(t.point.point.y) - 1.0) < 1e-9);
    // Agrees with the classification from the flow derivatives.
    auto s = tlab::classify_boundary_point(annulus().domain, annulus().field, t.point.point);
    CHECK(s.j == t.multiplicity);
    CHECK(s.sign == t.sign);
  }

  tlab::LocalModel junction(OmegaWord{1, 2, 1}, {-1, 0, 1}, 0.1);
  auto m = tlab::detect_tangency_chains(tlab::local_model_table(junction, 21));
  REQUIRE(m.size() == 1);
  CHECK(m[0].multiplicity == 2);
  CHECK(m[0].point.point.x == 0.0);
  CHECK(m[0].point.point.y == 0.0);

  tlab::LocalModel single(OmegaWord{2}, {0}, 0.1);
  auto st = tlab::local_model_table(single, 21);
  CHECK(tlab::detect_tangency_chains(st).empty());
  CHECK(tlab::detect_fixed_points(st).size() == 1);
}

TEST_CASE("trajectory graphs") {
  auto dg = tlab::build_trajectory_graph(table(disk()));
  CHECK(dg.nodes.size() == 2);
  CHECK(dg.edges.size() == 1);
  CHECK(count(dg, OmegaWord{2}) == 2);
  CHECK(dg.euler_characteristic() == 1);
  CHECK(tlab::check_degrees(dg).empty());

  auto ag = tlab::build_trajectory_graph(table(annulus()));
  CHECK(count(ag, OmegaWord{2}) == 2);
  CHECK(count(ag, OmegaWord{1, 2, 1}) == 2);
  CHECK(ag.edges.size() == 4);
  CHECK(ag.euler_characteristic() == 0);
  CHECK(tlab::check_degrees(ag).empty());
  CHECK(tlab::graph_dot(ag).find("(121)") != std::string::npos);

  auto bg = tlab::build_trajectory_graph(table(blob()));
  CHECK(count(bg, OmegaWord{1, 2, 1}) == 2);
  CHECK(bg.euler_characteristic() == 0);
}

TEST_CASE("euler characteristic from the boundary") {
  CHECK(tlab::euler_characteristic(table(disk())) == 1);
  tlab::TableOptions o;
  o.samples = 128;
  CHECK(tlab::euler_characteristic(tlab::mirror_table(disk().domain, disk().field, o)) == 1);
  CHECK(tlab::euler_characteristic(table(annulus())) == 0);
  CHECK(tlab::euler_characteristic(table(blob())) == 0);
}

TEST_CASE("isomorphism") {
  auto dg = tlab::build_trajectory_graph(table(disk()));
  auto ag = tlab::build_trajectory_graph(table(annulus()));
  CHECK(tlab::graph_isomorphic(dg, dg).found);
  CHECK_FALSE(tlab::graph_isomorphic(dg, ag).found);
  auto relabel = ag;
  relabel.nodes[0].label = OmegaWord{1, 1};
  CHECK_FALSE(tlab::graph_isomorphic(ag, relabel).found);
  // A directed 2-cycle is not two parallel edges.
  tlab::TrajectoryGraph p, q;
  p.nodes = q.nodes = {{OmegaWord{1, 2, 1}, {}}, {OmegaWord{1, 2, 1}, {}}};
  p.edges = {{0, 1, OmegaWord{1, 1}, {}}, {1, 0, OmegaWord{1, 1}, {}}};
  q.edges = {{0, 1, OmegaWord{1, 1}, {}}, {0, 1, OmegaWord{1, 1}, {}}};
  CHECK(tlab::graph_isomorphic(p, q).found);
  CHECK_FALSE(tlab::graph_isomorphic(p, q, true).found);
}

TEST_CASE("boundary graph matches the interior graph") {
  for (const Scene* s : {&disk(), &annulus(), &blob()}) {
    auto boundary = tlab::build_trajectory_graph(table(*s));
    auto interior = tlab::interior_graph(s->domain, s->field);
    CAPTURE(tlab::graph_dot(boundary));
    CAPTURE(tlab::graph_dot(interior));
    CHECK(tlab::graph_isomorphic(boundary, interior).found);
    CHECK(tlab::check_degrees(boundary).empty());
  }
}

TEST_CASE("reversal reverses the graph") {
  for (const Scene* s : {&disk(), &annulus(), &blob()}) {
    tlab::TableOptions o;
    o.samples = 256;
    auto g = tlab::build_trajectory_graph(tlab::compute_table(s->domain, s->field, o));
    auto m = tlab::build_trajectory_graph(tlab::mirror_table(s->domain, s->field, o));
    CHECK(tlab::graph_isomorphic(m, tlab::reversed(g), true).found);
  }
}
