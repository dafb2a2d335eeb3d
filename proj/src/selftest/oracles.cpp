#include "oracles.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tlab::oracle {

namespace {

std::string number(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << d(rng);
  return "(" + s.str() + ")";
}

}  // namespace

std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return "y";
    case 2: return number(rng, -2.0, 2.0);
    case 3: return "(" + random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1) + ")";
    case 4: return "(" + random_expression(rng, depth - 1) + " - " + random_expression(rng, depth - 1) + ")";
    case 5: return "(" + random_expression(rng, depth - 1) + " * " + random_expression(rng, depth - 1) + ")";
    case 6:
      return "(" + random_expression(rng, depth - 1) + ") / (2 + sin(" + random_expression(rng, depth - 1) + "))";
    case 7: return "sin(" + random_expression(rng, depth - 1) + ")";
    case 8: return "cos(" + random_expression(rng, depth - 1) + ")";
    case 9: return "exp(0.5 * sin(" + random_expression(rng, depth - 1) + "))";
    case 10: return "sqrt(1 + (" + random_expression(rng, depth - 1) + ")^2)";
    default: {
      std::uniform_int_distribution<int> e(2, 3);
      return "(" + random_expression(rng, depth - 1) + ")^" + std::to_string(e(rng));
    }
  }
}

std::pair<std::string, std::string> random_field(std::mt19937_64& rng) {
  std::string a = random_expression(rng, 2);
  std::string b = random_expression(rng, 2);
  // |0.3 sin| < 1 keeps the first component positive.
  return {"1 + 0.3 * sin(" + a + ")", "0.5 * cos(" + b + ")"};
}

Vec2 rk4_flow(const VectorField& v, Vec2 p, double t, int substeps) {
  double h = t / substeps;
  for (int i = 0; i < substeps; ++i) {
    Vec2 k1 = v.eval(p);
    Vec2 k2 = v.eval(p + 0.5 * h * k1);
    Vec2 k3 = v.eval(p + 0.5 * h * k2);
    Vec2 k4 = v.eval(p + h * k3);
    p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

double fd_flow_derivative(const Expr& w, const VectorField& v, Vec2 p, int k) {
  const double eps = std::numeric_limits<double>::epsilon();
  auto f = [&](double t) { return t == 0.0 ? w.eval(p) : w.eval(rk4_flow(v, p, t)); };
  switch (k) {
    case 1: {
      double h = std::pow(eps, 1.0 / 5.0);
      return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
    }
    case 2: {
      double h = std::pow(eps, 1.0 / 6.0);
      return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
    }
    case 3: {
      double h = std::pow(eps, 1.0 / 7.0);
      return (-f(3 * h) + 8 * f(2 * h) - 13 * f(h) + 13 * f(-h) - 8 * f(-2 * h) + f(-3 * h)) /
             (8 * h * h * h);
    }
    default: return std::nan("");
  }
}

int brute_force_flip_exponent(const OmegaWord& w) {
  std::vector<std::vector<int>> groups;
  int next = 0;
  for (int e : w.entries()) {
    std::vector<int> g;
    for (int i = 0; i < e - 1; ++i) g.push_back(next++);
    groups.push_back(std::move(g));
  }
  std::vector<int> perm;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) perm.insert(perm.end(), it->begin(), it->end());
  long inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  long terms = 0;
  for (int e : w.entries())
    if (e >= 2) terms += static_cast<long>(std::ceil((e - 2) / 2.0));
  return static_cast<int>((inversions + terms) % 2);
}

std::vector<double> stratified_depressed_coefficients(std::mt19937_64& rng, int m, double radius) {
  std::uniform_real_distribution<double> pos(-radius, radius);
  std::uniform_int_distribution<int> kind(0, 2);
  // Real quadratic factors (s^2 + b s + c) and linear factors (s - a).
  std::vector<double> linear;
  std::vector<std::pair<double, double>> quadratic;
  std::vector<double> all_real_parts;
  int left = m;
  while (left > 0) {
    int k = left == 1 ? 0 : kind(rng);
    double a = pos(rng);
    if (k == 0) {
      linear.push_back(a);
      all_real_parts.push_back(a);
      left -= 1;
    } else if (k == 1) {
      linear.push_back(a);
      linear.push_back(a);
      all_real_parts.insert(all_real_parts.end(), {a, a});
      left -= 2;
    } else {
      double b = std::fabs(pos(rng));
      quadratic.push_back({a, b});
      all_real_parts.insert(all_real_parts.end(), {a, a});
      left -= 2;
    }
  }
  double mean = 0.0;
  for (double a : all_real_parts) mean += a;
  mean /= m;
  std::vector<double> poly{1.0};
  auto multiply = [&](const std::vector<double>& f) {
    std::vector<double> out(poly.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += poly[i] * f[j];
    poly = std::move(out);
  };
  for (double a : linear) multiply({-(a - mean), 1.0});
  for (auto [a, b] : quadratic) {
    double c = a - mean;
    multiply({c * c + b * b, -2.0 * c, 1.0});
  }
  return {poly.begin(), poly.begin() + (m - 1)};
}

Vec2 disk_chord_exit(Vec2 entry) { return {-entry.x, entry.y}; }

double relative_error(double a, double b, double floor) {
  return std::fabs(a - b) / std::max(std::fabs(b), floor);
}

}  // namespace tlab::oracle
