#pragma once

#include <span>
#include <vector>

namespace tlab {

struct RealRoot {
  double value;
  int multiplicity;
};

/// p(s) with coefficients lowest degree first.
double poly_eval(std::span<const double> coeffs, double s);
std::vector<double> poly_derivative(std::span<const double> coeffs);

/// Real roots of a polynomial of degree >= 1, increasing, with
/// multiplicities. Roots closer than tol are merged into one multiple root;
/// a near-merge within a factor of two of tol throws IllConditioned.
///
/// Critical points come from the derivative recursively. Each monotone piece
/// between them holds at most one simple root, found by bisection. At a
/// critical point c of order k the closest roots lie at distance about
/// (|p(c)| (k+1)! / |p^(k+1)(c)|)^(1/(k+1)), which decides the merge.
std::vector<RealRoot> real_roots(std::span<const double> coeffs, double tol);

}  // namespace tlab
