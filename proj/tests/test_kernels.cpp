#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "tlab/kernels.hpp"

namespace k = tlab::kernels;

namespace {

bool same_bits(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::memcmp(&a, &b, sizeof a) == 0;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  // A few special values in every batch.
  if (n > 8) {
    v[1] = 0.0;
    v[3] = -0.0;
    v[5] = std::numeric_limits<double>::infinity();
    v[7] = 1e-310;
  }
  return v;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& s = k::scalar_table();
  double a[3] = {1, 2, 4}, b[3] = {4, 2, 1}, out[3];
  s.add(a, b, out, 3);
  CHECK(out[2] == 5);
  s.div(a, b, out, 3);
  CHECK(out[0] == 0.25);
  double c[3] = {1, -3, 2};  // x^2 - 3x + 2
  double xs[2] = {1, 3};
  s.horner(c, 3, xs, out, 2);
  CHECK(out[0] == 0);
  CHECK(out[1] == 2);

  double px[2] = {-5, -5}, py[2] = {0, 2}, dx[2] = {1, 1}, dy[2] = {0, 0};
  double tm[2], cl[2], hf[2];
  s.line_circle({px, py, dx, dy}, {0, 0, 1}, {tm, cl, hf});
  CHECK(tm[0] == 5);
  CHECK(cl[0] == -1);
  CHECK(hf[0] == 1);
  CHECK(cl[1] == 1);
  CHECK(hf[1] == 0);
}

TEST_CASE("active table honours the override") {
  const auto& t = k::active();
  if (const char* env = std::getenv("TRAVERSE_LAB_SIMD"); env && std::string(env) == "scalar")
    CHECK(t.isa == k::Isa::Scalar);
  else if (k::avx2_table())
    CHECK(t.isa == k::Isa::Avx2);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  const k::Table* v = k::avx2_table();
  if (!v) {
    MESSAGE("AVX2 not available; nothing to compare");
    return;
  }
  const auto& s = k::scalar_table();
  std::mt19937_64 rng(99);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
    auto a = random_values(rng, n), b = random_values(rng, n);
    std::vector<double> o1(n), o2(n);
    using Bin = void (*)(const double*, const double*, double*, std::size_t);
    for (Bin k::Table::*fn : {&k::Table::add, &k::Table::sub, &k::Table::mul, &k::Table::div}) {
      (s.*fn)(a.data(), b.data(), o1.data(), n);
      (v->*fn)(a.data(), b.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));
    }
    s.neg(a.data(), o1.data(), n);
    v->neg(a.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));
    s.sqrt(a.data(), o1.data(), n);
    v->sqrt(a.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));

    auto coeffs = random_values(rng, 7);
    s.horner(coeffs.data(), coeffs.size(), a.data(), o1.data(), n);
    v->horner(coeffs.data(), coeffs.size(), a.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));

    std::vector<double> dx(n), dy(n);
    std::uniform_real_distribution<double> ang(0, 6.283185307179586);
    for (std::size_t i = 0; i < n; ++i) {
      double t = ang(rng);
      dx[i] = std::cos(t);
      dy[i] = std::sin(t);
    }
    std::vector<double> t1(n), c1(n), h1(n), t2(n), c2(n), h2(n);
    k::LineBatch lines{a, b, dx, dy};
    s.line_circle(lines, {0.5, -1.0, 3.0}, {t1, c1, h1});
    v->line_circle(lines, {0.5, -1.0, 3.0}, {t2, c2, h2});
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(same_bits(t1[i], t2[i]));
      CHECK(same_bits(c1[i], c2[i]));
      CHECK(same_bits(h1[i], h2[i]));
    }
  }
}
