#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tlab/billiards.hpp"
#include "tlab/error.hpp"
#include "tlab/flow_sim.hpp"

using tlab::BilliardTable;
using tlab::Conic;
using tlab::Heading;
using tlab::OmegaWord;
using tlab::TableCurve;
using tlab::UnitState;
using tlab::Vec2;

namespace {

constexpr double kPi = std::numbers::pi;

const BilliardTable& disk() {
  static const BilliardTable t = BilliardTable::disk(1.0);
  return t;
}

const BilliardTable& shell() {
  static const BilliardTable t = BilliardTable::shell(2.0, 1.0);
  return t;
}

UnitState state_on(const BilliardTable& t, int curve, Vec2 p, Vec2 u) { return tlab::make_state(t, curve, p, u); }

}  // namespace

TEST_CASE("tau") {
  auto in = state_on(disk(), 0, {1, 0}, {-1, 0});
  CHECK(tlab::heading(in) == Heading::Inward);
  auto out = tlab::tau(in);
  CHECK(tlab::heading(out) == Heading::Outward);
  CHECK(out.direction().x == doctest::Approx(1.0));
  auto tangent = state_on(disk(), 0, {0, 1}, {1, 0});
  CHECK(tlab::heading(tangent) == Heading::Tangent);
  CHECK(tlab::tau(tangent).direction().x == tangent.direction().x);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int i = 0; i < 1000; ++i) {
    double a = ang(rng), b = ang(rng);
    auto st = state_on(shell(), i % 2, {2 * std::cos(a), 2 * std::sin(a)}, {std::cos(b), std::sin(b)});
    auto back = tlab::tau(tlab::tau(st));
    CHECK(back.normal == st.normal);
    CHECK(back.tangential == st.tangential);
  }
}

TEST_CASE("disk chords") {
  for (double theta : {0.3, 1.1, 2.5, 4.0}) {
    for (double psi : {0.2, 0.7, 1.3}) {
      // Direction making angle psi with the tangent at the entry.
      Vec2 m{std::cos(theta), std::sin(theta)};
      Vec2 tangent{-std::sin(theta), std::cos(theta)};
      Vec2 u = std::cos(psi) * tangent - std::sin(psi) * m;
      auto in = state_on(disk(), 0, m, u);
      auto sc = tlab::scatter(disk(), in);
      Vec2 expect{std::cos(theta + kPi - 2 * (kPi / 2 - psi)), std::sin(theta + kPi - 2 * (kPi / 2 - psi))};
      CHECK(tlab::distance(sc.out.point, expect) < 1e-12);
      CHECK(sc.omega == OmegaWord{1, 1});
      CHECK(tlab::heading(sc.out) == Heading::Outward);
    }
  }
}

TEST_CASE("shell chords") {
  auto in = state_on(shell(), 0, {-std::sqrt(3.0), 1}, {1, 0});
  auto sc = tlab::scatter(shell(), in);
  CHECK(sc.omega == OmegaWord{1, 2, 1});
  REQUIRE(sc.divisor.size() == 3);
  CHECK(tlab::distance(sc.divisor[1].point, {0, 1}) < 1e-9);
  CHECK(tlab::distance(sc.out.point, {std::sqrt(3.0), 1}) < 1e-12);
  // The tangency does not reflect: the billiard reflects first at the outer exit.
  auto next = tlab::billiard_map(shell(), in);
  CHECK(tlab::distance(next.point, {std::sqrt(3.0), 1}) < 1e-12);
  CHECK(tlab::distance(next.direction(), {-0.5, -std::sqrt(3.0) / 2}) < 1e-12);

  auto high = tlab::scatter(shell(), state_on(shell(), 0, {-std::sqrt(4 - 2.25), 1.5}, {1, 0}));
  CHECK(high.omega == OmegaWord{1, 1});
  auto low = tlab::scatter(shell(), state_on(shell(), 0, {-std::sqrt(4 - 0.25), 0.5}, {1, 0}));
  CHECK(low.out.curve == 1);
  CHECK(tlab::distance(low.out.point, {-std::sqrt(0.75), 0.5}) < 1e-12);
  CHECK_THROWS_AS(tlab::scatter(shell(), tlab::tau(in)), tlab::Error);
}

TEST_CASE("scatter agrees with the flow on the shell") {
  tlab::Domain2D annulus(tlab::Expr::parse("(4 - x^2 - y^2)*(x^2 + y^2 - 1)"), {-2.5, 2.5, -2.5, 2.5});
  auto east = tlab::VectorField::constant({1, 0});
  for (double y : {-1.8, -1.2, -0.6, 0.0, 0.4, 1.3, 1.9}) {
    Vec2 entry{-std::sqrt(4 - y * y), y};
    auto sc = tlab::scatter(shell(), state_on(shell(), 0, entry, {1, 0}));
    auto tr = tlab::trace_trajectory(annulus, east, annulus.locate(entry));
    CAPTURE(y);
    CHECK(tlab::distance(sc.out.point, tr.divisor[1].point.point) < 1e-6);
  }
}

TEST_CASE("circle billiard conserves the incidence angle") {
  auto st = state_on(disk(), 0, {1, 0}, {-std::cos(0.4), std::sin(0.4)});
  const double normal = st.normal;
  const double L = disk().curve(0).param().length();
  double worst = 0.0, worst_arc = 0.0;
  for (int i = 0; i < 10000; ++i) {
    auto next = tlab::billiard_map(disk(), st);
    worst = std::max(worst, std::fabs(next.normal - normal));
    double adv = std::fmod(next.s - st.s + L, L);
    // Central angle of the chord: pi - 2 * incidence angle from the normal.
    double want = kPi - 2 * std::acos(-normal);
    worst_arc = std::max(worst_arc, std::fabs(adv - want));
    st = next;
  }
  CHECK(worst <= 1e-9);
  CHECK(worst_arc <= 1e-6);
}

TEST_CASE("smooth square orbit stays inward") {
  BilliardTable sq({TableCurve::implicit(tlab::Expr::parse("1 - x^4 - y^4"), {-1.3, 1.3, -1.3, 1.3})});
  auto st = tlab::make_state(sq, 0, {1, 0}, {-1, 0.37});
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(tlab::heading(st) == Heading::Inward);
    st = tlab::billiard_map(sq, st);
    CHECK(std::fabs(std::pow(st.point.x, 4) + std::pow(st.point.y, 4) - 1.0) < 1e-9);
  }
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(BilliardTable({TableCurve::circle({0, 0}, 1), TableCurve::circle({0.8, 0}, 0.5)}), tlab::Error);
  CHECK_THROWS_AS(BilliardTable({TableCurve::circle({0, 0}, 3), TableCurve::circle({-0.5, 0}, 0.6),
                                 TableCurve::circle({0.5, 0}, 0.6)}),
                  tlab::Error);
}

TEST_CASE("poncelet") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  std::vector<Vec2> starts;
  Conic outer = Conic::circle({0, 0}, 1), inner = Conic::circle({0, 0}, 0.5);
  for (int i = 0; i < 10; ++i) starts.push_back(outer.point_at(ang(rng)));
  auto three = tlab::poncelet_check(outer, inner, 3, starts);
  CHECK(three.worst <= 1e-6);
  auto four = tlab::poncelet_check(outer, inner, 4, starts);
  for (double r : four.residuals) CHECK(r > 0.1);
  CHECK_THROWS_AS(tlab::poncelet_step(outer, Conic::circle({0, 0}, 1.5), {1, 0}), tlab::Error);

  Conic ellipse{{0.3, -0.2}, 2.0, 1.2};
  Conic inner3 = tlab::confocal_closure(ellipse, 3);
  std::vector<Vec2> es;
  for (int i = 0; i < 10; ++i) es.push_back(ellipse.point_at(ang(rng)));
  auto closed = tlab::poncelet_check(ellipse, inner3, 3, es);
  CHECK(closed.worst <= 1e-6);
  MESSAGE("confocal 3-closure worst residual " << closed.worst);
  Conic inner4 = tlab::confocal_closure(ellipse, 4);
  CHECK(tlab::poncelet_check(ellipse, inner4, 4, es).worst <= 1e-6);
}

TEST_CASE("tangency census") {
  std::mt19937_64 rng(11);
  auto c = tlab::tangency_census(shell(), tlab::random_lines(shell(), 20000, rng));
  CHECK(c.max_reduced <= 1);
  CHECK(c.violations == 0);
  CHECK(c.chords > 10000);

  auto plain = tlab::tangency_census(disk(), tlab::random_lines(disk(), 5000, rng));
  CHECK(plain.max_reduced == 0);

  BilliardTable two({TableCurve::circle({0, 0}, 3), TableCurve::circle({-1, 0}, 0.5), TableCurve::circle({1, 0}, 0.5)});
  auto common = tlab::tangency_census(two, {{{-5, 0.5}, {1, 0}}});
  CHECK(common.max_reduced == 2);
  CHECK(common.violations == 0);
  CHECK(common.multiplicity.at(6) == 1);

  BilliardTable oval({TableCurve::ellipse({0, 0}, 3, 2), TableCurve::ellipse({0.4, 0.1}, 0.8, 0.5)});
  auto o = tlab::tangency_census(oval, {{{-5, 0.6}, {1, 0}}, {{-5, 0.0}, {1, 0}}});
  CHECK(o.max_reduced == 1);
  CHECK(o.chords == 3);
}
