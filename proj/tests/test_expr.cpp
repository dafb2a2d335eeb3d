#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tlab/error.hpp"
#include "tlab/expr.hpp"

using tlab::Expr;
using tlab::Vec2;
using tlab::VectorField;

TEST_CASE("parse and evaluate") {
  Expr disk = Expr::parse("1 - x^2 - y^2");
  CHECK(disk.eval(0, 0) == 1.0);
  CHECK(disk.eval(0, 1) == 0.0);
  CHECK(Expr::parse("exp(x)").eval(1, 0) == doctest::Approx(std::numbers::e).epsilon(1e-15));
  CHECK(Expr::parse("sin(x)*y").eval(0.5, 2.0) == doctest::Approx(2.0 * std::sin(0.5)));
  CHECK(Expr::parse("-x^2").eval(3, 0) == -9.0);
  CHECK(Expr::parse("(x+1)^0").eval(5, 0) == 1.0);
  CHECK(Expr::parse("2*x^3/4").eval(2, 0) == 4.0);
  CHECK(Expr::parse("1.5e1 + y").eval(0, 1) == 16.0);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    Expr::parse("x +");
    FAIL("expected syntax error");
  } catch (const tlab::SyntaxError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(Expr::parse("x^1.5"), tlab::SyntaxError);
  CHECK_THROWS_AS(Expr::parse("x^-1"), tlab::SyntaxError);
  CHECK_THROWS_AS(Expr::parse("(x"), tlab::SyntaxError);
  CHECK_THROWS_AS(Expr::parse("x y"), tlab::SyntaxError);
  try {
    Expr::parse("tan(x)");
    FAIL("expected unknown identifier");
  } catch (const tlab::Error& e) {
    CHECK(e.code() == tlab::ErrorCode::UnknownIdentifier);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(Expr::parse("sqrt(x)").eval(-1, 0), tlab::Error);
  CHECK_THROWS_AS(Expr::parse("log(x)").eval(0, 0), tlab::Error);
  CHECK_THROWS_AS(Expr::parse("1/x").eval(0, 0), tlab::Error);
}

TEST_CASE("lie jets of the unit disk") {
  Expr w = Expr::parse("1 - x^2 - y^2");
  VectorField v = VectorField::constant({1, 0});
  auto a = tlab::lie_jet(w, v, {0, 1}, 2);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);
  CHECK(a[2] == -2.0);
  auto b = tlab::lie_jet(w, v, {-0.6, 0.8}, 1);
  CHECK(std::fabs(b[0]) < 1e-15);
  CHECK(b[1] == doctest::Approx(1.2).epsilon(1e-15));
  auto c = tlab::lie_jet(Expr::parse("y"), VectorField::constant({0, 1}), {0.3, -0.7}, 3);
  CHECK(c[0] == -0.7);
  CHECK(c[1] == 1.0);
  CHECK(c[2] == 0.0);
  CHECK(c[3] == 0.0);
}

TEST_CASE("gradient") {
  Vec2 g = tlab::gradient(Expr::parse("x^2*y + sin(y)"), {2, 0.5});
  CHECK(g.x == doctest::Approx(2 * 2 * 0.5));
  CHECK(g.y == doctest::Approx(4 + std::cos(0.5)));
}

TEST_CASE("jets are exact on polynomials") {
  // w = x^3 y - 2 x y^2 + y^4, v = (a, b) constant: L_v^k w is the k-th
  // directional derivative, written out by hand.
  Expr w = Expr::parse("x^3*y - 2*x*y^2 + y^4");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    double a = u(rng), b = u(rng), x = u(rng), y = u(rng);
    auto j = tlab::lie_jet(w, VectorField::constant({a, b}), {x, y}, 4);
    double d1 = a * (3 * x * x * y - 2 * y * y) + b * (x * x * x - 4 * x * y + 4 * y * y * y);
    double wxx = 6 * x * y, wxy = 3 * x * x - 4 * y, wyy = -4 * x + 12 * y * y;
    double d2 = a * a * wxx + 2 * a * b * wxy + b * b * wyy;
    double wxxx = 6 * y, wxxy = 6 * x, wxyy = -4, wyyy = 24 * y;
    double d3 = a * a * a * wxxx + 3 * a * a * b * wxxy + 3 * a * b * b * wxyy + b * b * b * wyyy;
    double d4 = 4 * a * a * a * b * 6 + b * b * b * b * 24;
    double scale = 1 + std::fabs(d1) + std::fabs(d2) + std::fabs(d3) + std::fabs(d4);
    CHECK(std::fabs(j[1] - d1) <= 8 * 2.2e-16 * scale * 10);
    CHECK(std::fabs(j[2] - d2) <= 8 * 2.2e-16 * scale * 10);
    CHECK(std::fabs(j[3] - d3) <= 8 * 2.2e-16 * scale * 10);
    CHECK(std::fabs(j[4] - d4) <= 8 * 2.2e-16 * scale * 10);
  }
}

TEST_CASE("jets agree with finite differences along random flows") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Expr w = Expr::parse(tlab::oracle::random_expression(rng, 3));
    auto [fx, fy] = tlab::oracle::random_field(rng);
    VectorField v = VectorField::parse(fx, fy);
    Vec2 p{u(rng), u(rng)};
    auto jet = tlab::lie_jet(w, v, p, 3);
    for (int k = 1; k <= 3; ++k) {
      double fd = tlab::oracle::fd_flow_derivative(w, v, p, k);
      double err = tlab::oracle::relative_error(jet[k], fd);
      worst = std::max(worst, err);
      CAPTURE(w.source());
      CAPTURE(k);
      CHECK(err <= 1e-5);
    }
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("batch evaluation is bit-identical to scalar evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Expr e = Expr::parse(tlab::oracle::random_expression(rng, 4));
    std::vector<double> xs(37), ys(37), out(37);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = u(rng);
      ys[i] = u(rng);
    }
    e.eval_batch(xs, ys, out);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == e.eval(xs[i], ys[i]));
  }
}

TEST_CASE("denominator lint") {
  auto warn = tlab::lint_denominators(Expr::parse("1/(x - 0.1)"), {-1, 1, -1, 1});
  CHECK(warn.size() == 1);
  CHECK(tlab::lint_denominators(Expr::parse("1/(2 + x)"), {-1, 1, -1, 1}).empty());
  CHECK(tlab::lint_denominators(Expr::parse("1 - x^2"), {-1, 1, -1, 1}).empty());
}

TEST_CASE("negated field") {
  VectorField v = VectorField::parse("1 + x", "y*y");
  Vec2 n = v.negated().eval({0.5, 2});
  CHECK(n.x == -1.5);
  CHECK(n.y == -4.0);
}
