#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tlab/error.hpp"
#include "tlab/local_model.hpp"

using tlab::Divisor;
using tlab::LocalModel;
using tlab::OmegaWord;
using tlab::Polarity;

namespace {

LocalModel m121() { return LocalModel(OmegaWord{1, 2, 1}, {-1, 0, 1}, 0.1); }
LocalModel m2() { return LocalModel(OmegaWord{2}, {0}, 1.0); }

std::vector<double> vec(std::initializer_list<double> v) { return v; }

// Multiplicity words of the components of a divisor.
std::vector<OmegaWord> component_words(const Divisor& d) {
  std::vector<OmegaWord> out;
  for (const auto& iv : tlab::components(d)) {
    std::vector<int> w;
    for (const auto& p : d)
      if (p.u >= iv.lo && p.u <= iv.hi) w.push_back(p.multiplicity);
    out.emplace_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("evaluate") {
  CHECK(tlab::evaluate(m121(), 0.0, vec({0})) == 0.0);
  CHECK(tlab::evaluate(m121(), 2.0, vec({0})) == 12.0);
  CHECK(tlab::evaluate(m2(), 0.0, vec({-0.25})) == -0.25);
  CHECK_THROWS_AS(tlab::evaluate(m2(), 0.0, vec({-2})), tlab::Error);
  CHECK_THROWS_AS(tlab::evaluate(m2(), 0.0, vec({})), tlab::Error);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(LocalModel(OmegaWord{1, 1}, {1, 0}, 0.1), tlab::Error);
  CHECK_THROWS_AS(LocalModel(OmegaWord{1, 2, 1}, {-1, 0, 1}, 0.5), tlab::Error);
  CHECK(m121().dimension() == 1);
  CHECK(LocalModel(OmegaWord{3, 2, 1}, {-5, 0, 5}, 0.1).dimension() == 3);
}

TEST_CASE("fiber divisors") {
  Divisor d = tlab::fiber_divisor(m121(), vec({0}));
  REQUIRE(d.size() == 3);
  CHECK(d[0].u == -1.0);
  CHECK(d[0].multiplicity == 1);
  CHECK(d[0].polarity == Polarity::Plus);
  CHECK(d[1].u == 0.0);
  CHECK(d[1].multiplicity == 2);
  CHECK(d[1].polarity == Polarity::Plus);
  CHECK(d[2].multiplicity == 1);
  CHECK(d[2].polarity == Polarity::Minus);

  Divisor e = tlab::fiber_divisor(m121(), vec({0.1}));
  REQUIRE(e.size() == 2);
  CHECK(e[0].polarity == Polarity::Plus);
  CHECK(e[1].polarity == Polarity::Minus);

  Divisor f = tlab::fiber_divisor(m2(), vec({-0.25}));
  REQUIRE(f.size() == 2);
  CHECK(f[0].u == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(f[1].u == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f[0].polarity == Polarity::Plus);
  CHECK(f[1].polarity == Polarity::Minus);
}

TEST_CASE("components") {
  auto a = tlab::components(m121(), vec({0}));
  REQUIRE(a.size() == 1);
  CHECK(a[0].lo == -1.0);
  CHECK(a[0].hi == 1.0);
  auto b = tlab::components(m121(), vec({-0.04}));
  REQUIRE(b.size() == 2);
  CHECK(b[0].hi == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(b[1].lo == doctest::Approx(0.2).epsilon(1e-12));
  auto c = tlab::components(m2(), vec({0}));
  REQUIRE(c.size() == 1);
  CHECK(c[0].singleton());
  CHECK(c[0].lo == 0.0);
  // Odd degree: unbounded lower component.
  auto odd = tlab::components(LocalModel(OmegaWord{3}, {0}, 1.0), vec({0, 0}));
  REQUIRE(odd.size() == 1);
  CHECK(std::isinf(odd[0].lo));
  CHECK(odd[0].hi == 0.0);
}

TEST_CASE("model causality") {
  auto c0 = tlab::model_causality(m121(), vec({0}), -1.0);
  CHECK_FALSE(c0.fixed);
  CHECK(c0.u == 0.0);
  CHECK(tlab::model_causality(m121(), vec({0}), 0.0).u == 1.0);
  CHECK(tlab::model_causality(m121(), vec({-0.04}), -1.0).u == doctest::Approx(-0.2));
  CHECK(tlab::model_causality(m121(), vec({-0.04}), 0.2).u == 1.0);
  auto fixed = tlab::model_causality(m2(), vec({0}), 0.0);
  CHECK(fixed.fixed);
  CHECK(fixed.u == 0.0);
  CHECK_THROWS_AS(tlab::model_causality(m121(), vec({0}), 1.0), tlab::Error);
  CHECK_THROWS_AS(tlab::model_causality(m121(), vec({0}), 0.5), tlab::Error);
}

TEST_CASE("polarity rules") {
  Divisor atom{{0.0, 2, Polarity::Plus}};
  CHECK(tlab::polarity(atom, 0) == Polarity::Minus);
  Divisor chord{{0.0, 1, Polarity::Plus}, {1.0, 1, Polarity::Plus}};
  CHECK(tlab::polarity(chord, 0) == Polarity::Plus);
  CHECK(tlab::polarity(chord, 1) == Polarity::Minus);
  Divisor tangent{{-1.0, 1, Polarity::Plus}, {0.0, 2, Polarity::Plus}, {1.0, 1, Polarity::Plus}};
  CHECK(tlab::polarity(tangent, 1) == Polarity::Plus);
}

TEST_CASE("components of admissible models have admissible words") {
  std::mt19937_64 rng(17);
  int checked = 0, ill = 0;
  for (const auto& w : tlab::enumerate_admissible(4, 6)) {
    if (tlab::norm(w) > 6) continue;
    std::vector<double> centres;
    for (std::size_t i = 0; i < w.size(); ++i) centres.push_back(4.0 * static_cast<double>(i));
    LocalModel model(w, centres, 0.05);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(model.dimension());
      // Half uniform in the box, half on strata with multiple roots.
      if (trial % 2 == 0) {
        for (auto& c : x) c = u(rng);
      } else {
        std::size_t k = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (w[i] < 2) continue;
          auto part = tlab::oracle::stratified_depressed_coefficients(rng, w[i], 0.2);
          for (double c : part) x[k++] = std::clamp(c, -0.05, 0.05);
        }
      }
      try {
        Divisor d = tlab::fiber_divisor(model, x);
        for (const auto& cw : component_words(d)) {
          CAPTURE(w.to_string());
          CAPTURE(cw.to_string());
          CHECK(tlab::is_admissible(cw));
        }
        ++checked;
      } catch (const tlab::Error& e) {
        REQUIRE(e.code() == tlab::ErrorCode::IllConditioned);
        ++ill;
      }
    }
  }
  CHECK(ill * 100 < checked);
}

TEST_CASE("fixed points are exactly the singleton components") {
  std::mt19937_64 rng(3);
  for (int m : {2, 4, 6}) {
    LocalModel model(OmegaWord{m}, {0}, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      auto x = tlab::oracle::stratified_depressed_coefficients(rng, m, 0.5);
      Divisor d;
      try {
        d = tlab::fiber_divisor(model, x);
      } catch (const tlab::Error&) {
        continue;
      }
      auto comps = tlab::components(d);
      for (const auto& p : d) {
        bool singleton = false;
        for (const auto& iv : comps) singleton |= iv.singleton() && iv.lo == p.u;
        if (p.polarity == Polarity::Minus && !singleton) {
          CHECK_THROWS_AS(tlab::model_causality(model, x, p.u), tlab::Error);
          continue;
        }
        auto img = tlab::model_causality(model, x, p.u);
        CHECK(img.fixed == singleton);
        if (singleton) {
          CHECK(p.multiplicity % 2 == 0);
          CHECK(p.polarity == Polarity::Minus);
        } else {
          CHECK(img.u > p.u);
        }
      }
    }
  }
}

TEST_CASE("longest chains in single-factor models match floor(m/2)") {
  std::mt19937_64 rng(8);
  for (int m = 2; m <= 5; ++m) {
    LocalModel model(OmegaWord{m}, {0}, 1.0);
    int best = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      double radius = 0.5 * std::pow(0.8, trial % 12);
      auto x = tlab::oracle::stratified_depressed_coefficients(rng, m, radius);
      try {
        best = std::max(best, tlab::longest_chain(tlab::fiber_divisor(model, x)));
      } catch (const tlab::Error&) {
      }
    }
    CAPTURE(m);
    CHECK(best == tlab::chain_bound(m));
  }
}

TEST_CASE("piecewise-linear interpolator") {
  tlab::PlInterpolator id({0, 1}, {0, 1});
  CHECK(id(0.3) == 0.3);
  CHECK(id(-5) == -5);
  tlab::PlInterpolator f({0, 1}, {0, 2});
  CHECK(f(0.5) == 1.0);
  CHECK(f(-3) == -3.0);
  CHECK(f(4) == 5.0);
  CHECK_THROWS_AS(tlab::PlInterpolator({0, 1}, {0}), tlab::Error);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a, b, c;
    double xa = -1, xb = 0, xc = 1;
    for (int k = 0; k < 5; ++k) {
      a.push_back(xa += u(rng));
      b.push_back(xb += u(rng));
      c.push_back(xc += u(rng));
    }
    tlab::PlInterpolator ab(a, b), bc(b, c), ac(a, c);
    for (double p : a) CHECK(bc(ab(p)) == ac(p));
    double prev = ab(-10.0);
    for (double s = -10.0 + 0.01; s < 10.0; s += 0.01) {
      double v = ab(s);
      CHECK(v > prev);
      CHECK(v - prev < 0.01 * 20);
      prev = v;
    }
  }
}

TEST_CASE("separating coordinates") {
  CHECK(tlab::separating_contraction(0.5) == doctest::Approx(0.4323).epsilon(1e-4));
  // Below t ~ 0.027 the deficit t e^{-1/t} drops under one ulp of t.
  for (double t = 0.03; t <= 1.0; t += 0.01) {
    double p = tlab::separating_contraction(t);
    CHECK(p > 0.0);
    CHECK(p < t);
  }

  std::vector<double> ts;
  for (int i = 1; i <= 20; ++i) ts.push_back(i / 20.0);
  auto sc = tlab::separating_coordinates(m121(), vec({-0.05}), ts);
  CHECK(sc.arc == "radial");
  for (const auto& f : sc.fibers) {
    REQUIRE(f.components.size() == 2);
    CHECK(f.components[0].x_tilde != f.components[1].x_tilde);
    CHECK(f.components[0].x_tilde == f.x);
  }

  auto one = tlab::separating_coordinates(LocalModel(OmegaWord{1, 1}, {0, 1}, 0.1), vec({}), ts);
  for (const auto& f : one.fibers) {
    REQUIRE(f.components.size() == 1);
    CHECK(f.components[0].x_tilde == f.x);
  }
}
