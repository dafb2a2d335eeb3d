#include "tlab/poly.hpp"

#include <algorithm>
#include <cmath>

#include "tlab/error.hpp"

namespace tlab {

double poly_eval(std::span<const double> coeffs, double s) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::vector<double> poly_derivative(std::span<const double> coeffs) {
  std::vector<double> d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * static_cast<double>(i));
  return d;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(std::span<const double> p, double lo, double hi, int sign_lo) {
  for (int iter = 0; iter < 2000; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = poly_eval(p, mid);
    if (fm == 0.0) return mid;
    if (sign(fm) == sign_lo) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<RealRoot> real_roots(std::span<const double> coeffs, double tol) {
  std::vector<double> p(coeffs.begin(), coeffs.end());
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  if (p.size() < 2) throw Error(ErrorCode::Domain, "real_roots needs degree >= 1");
  if (p.size() == 2) return {{-p[0] / p[1], 1}};

  std::vector<double> dp = poly_derivative(p);
  std::vector<RealRoot> crit = real_roots(dp, tol);

  std::vector<RealRoot> out;
  std::vector<bool> merged(crit.size(), false);
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const int k = crit[i].multiplicity;
    std::vector<double> dk = p;
    double factorial = 1.0;
    for (int j = 1; j <= k + 1; ++j) {
      dk = poly_derivative(dk);
      factorial *= j;
    }
    double top = std::fabs(poly_eval(dk, crit[i].value));
    double rho = std::pow(std::fabs(poly_eval(p, crit[i].value)) * factorial / top, 1.0 / (k + 1));
    if (rho <= 0.5 * tol) {
      out.push_back({crit[i].value, k + 1});
      merged[i] = true;
    } else if (rho <= tol) {
      throw Error(ErrorCode::IllConditioned,
                  "roots near " + std::to_string(crit[i].value) + " sit at the clustering threshold");
    }
  }

  double bound = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, std::fabs(p[i] / p.back()));
  bound += 1.0;

  std::vector<double> breaks{-bound};
  std::vector<bool> is_root{false};
  for (std::size_t i = 0; i < crit.size(); ++i) {
    breaks.push_back(crit[i].value);
    is_root.push_back(merged[i]);
  }
  breaks.push_back(bound);
  is_root.push_back(false);

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    double shift = std::min(tol, 0.5 * (b - a));
    if (is_root[i]) a += shift;
    if (is_root[i + 1]) b -= shift;
    int sa = sign(poly_eval(p, a)), sb = sign(poly_eval(p, b));
    if (sa * sb < 0) out.push_back({bisect(p, a, b, sa), 1});
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& l, const RealRoot& r) { return l.value < r.value; });
  return out;
}

}  // namespace tlab
