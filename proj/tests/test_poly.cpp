#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>

#include "doctest.h"
#include "tlab/error.hpp"
#include "tlab/poly.hpp"

namespace {

// Oracle: eigenvalues of the companion matrix, keeping near-real ones.
std::vector<double> companion_real_roots(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    if (std::fabs(es.eigenvalues()[i].imag()) < 1e-9) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> from_roots(const std::vector<double>& roots) {
  std::vector<double> p{1.0};
  for (double r : roots) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] -= r * p[i];
      q[i + 1] += p[i];
    }
    p = q;
  }
  return p;
}

}  // namespace

TEST_CASE("evaluation and derivative") {
  std::vector<double> p{2, -3, 1};
  CHECK(tlab::poly_eval(p, 1.0) == 0.0);
  CHECK(tlab::poly_eval(p, 3.0) == 2.0);
  CHECK(tlab::poly_derivative(p) == std::vector<double>{-3, 2});
}

TEST_CASE("multiple roots are merged") {
  auto r = tlab::real_roots(std::vector<double>{0, 0, 1}, 1e-7);
  REQUIRE(r.size() == 1);
  CHECK(r[0].value == 0.0);
  CHECK(r[0].multiplicity == 2);

  auto q = tlab::real_roots(from_roots({-1, 0.5, 0.5, 0.5, 2}), 1e-7);
  REQUIRE(q.size() == 3);
  CHECK(q[1].multiplicity == 3);
  CHECK(q[1].value == doctest::Approx(0.5).epsilon(1e-9));

  auto none = tlab::real_roots(std::vector<double>{1, 0, 1}, 1e-7);
  CHECK(none.empty());
}

TEST_CASE("near-merge at the threshold is reported") {
  // Roots at +-d: half-separation d. Merge when d <= tol/2, error up to tol.
  CHECK(tlab::real_roots(std::vector<double>{-1e-16, 0, 1}, 1e-7).size() == 1);
  CHECK_THROWS_AS(tlab::real_roots(std::vector<double>{-0.49e-14, 0, 1}, 1e-7), tlab::Error);
  CHECK(tlab::real_roots(std::vector<double>{-4e-14, 0, 1}, 1e-7).size() == 2);
}

TEST_CASE("simple roots agree with the companion-matrix oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    int n = deg(rng);
    std::vector<double> c(n + 1);
    for (auto& v : c) v = u(rng);
    c[n] = 1.0;
    auto oracle = companion_real_roots(c);
    bool separated = true;
    for (std::size_t i = 1; i < oracle.size(); ++i) separated &= oracle[i] - oracle[i - 1] > 1e-3;
    if (!separated) continue;
    auto got = tlab::real_roots(c, 1e-7);
    REQUIRE(got.size() == oracle.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].multiplicity == 1);
      CHECK(got[i].value == doctest::Approx(oracle[i]).epsilon(1e-8));
    }
  }
}
