#pragma once

// Polynomial local models of boundary tangency. The model for a word
// w = (w_1 .. w_p) with cluster centres a_1 < .. < a_p is
//
//   P(u, x) = prod_i [ (u - a_i)^{w_i} + sum_{l=0}^{w_i-2} x_{i,l} (u - a_i)^l ]
//
// and the region is {P <= 0}. A fiber over x is the set of u with P(u,x) <= 0;
// its boundary points are the real roots of P(., x).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlab/omega.hpp"

namespace tlab {

enum class Polarity { Plus, Minus };

char to_char(Polarity p);

struct DivisorPoint {
  double u;
  int multiplicity;
  Polarity polarity;
};

/// Boundary points of one fiber, increasing in u.
using Divisor = std::vector<DivisorPoint>;

/// Closed interval; lo is -infinity for the unbounded lower component of an
/// odd-degree model. Singleton components have lo == hi.
struct Interval {
  double lo, hi;
  bool singleton() const { return lo == hi; }
};

class LocalModel {
public:
  /// Throws Domain when centres are not increasing or when the coefficient
  /// box is too large to keep the root clusters of different factors apart.
  LocalModel(OmegaWord word, std::vector<double> centres, double box_radius, double transverse_radius = 1.0);

  const OmegaWord& word() const { return word_; }
  const std::vector<double>& centres() const { return centres_; }
  double box_radius() const { return box_; }
  double transverse_radius() const { return transverse_; }

  /// Number of coefficients x_{i,l}, ordered by (i, l).
  std::size_t dimension() const { return offsets_.back(); }
  /// Half-width of the interval around centre i holding that factor's real roots.
  double cluster_radius(std::size_t i) const { return cluster_[i]; }
  /// Clustering tolerance for roots of factor i.
  double root_tolerance(std::size_t i) const;

  /// Coefficients of factor i in s = u - a_i, lowest degree first.
  std::vector<double> factor(std::size_t i, std::span<const double> x) const;

private:
  OmegaWord word_;
  std::vector<double> centres_;
  double box_;
  double transverse_;
  std::vector<std::size_t> offsets_;
  std::vector<double> cluster_;
};

double evaluate(const LocalModel& model, double u, std::span<const double> x);

/// Polarity of point k from the multiplicities alone: P is positive beyond the
/// last root and changes sign across odd roots. Even root with P >= 0 around
/// it (an atom): Minus. Even root inside a string: Plus. Odd root where P
/// turns negative: Plus. Odd root where P turns positive: Minus.
Polarity polarity(const Divisor& d, std::size_t k);

Divisor fiber_divisor(const LocalModel& model, std::span<const double> x);

std::vector<Interval> components(const Divisor& d);
std::vector<Interval> components(const LocalModel& model, std::span<const double> x);

/// Image of a boundary point under the model's causality map.
struct ModelImage {
  bool fixed;
  double u;
};

/// `entry` must match a root of the fiber to within its clustering
/// tolerance. Singleton components are fixed. Otherwise a Minus point throws
/// NotInDomain and a Plus point maps to the next point of its component.
ModelImage model_causality(const LocalModel& model, std::span<const double> x, double entry);

/// Longest run of causality arrows inside one component of the fiber.
int longest_chain(const Divisor& d);

/// Increasing piecewise-linear map sending from[k] to to[k], slope 1 outside.
class PlInterpolator {
public:
  PlInterpolator(std::vector<double> from, std::vector<double> to);
  double operator()(double u) const;

private:
  std::vector<double> from_, to_;
};

/// Contraction used to separate successive components: t - t e^{-1/t}.
double separating_contraction(double t);

struct SeparatedComponent {
  Interval interval;
  double parameter;             // arc parameter the component is attached to
  std::vector<double> x_tilde;  // separating coordinate
};

struct SeparatedFiber {
  double t;
  std::vector<double> x;
  std::vector<SeparatedComponent> components;
};

struct SeparatingCoordinates {
  std::string arc = "radial";  // x(t) = t x*, in place of a Vieta contraction arc
  std::vector<SeparatedFiber> fibers;
};

/// Along x(t) = t x*, the k-th component (k = 0, 1, ..) over x(t) gets
/// x_tilde = x(phi^k(t)) where phi is separating_contraction. Distinct
/// components over the same x therefore get distinct x_tilde when x* != 0.
SeparatingCoordinates separating_coordinates(const LocalModel& model, std::span<const double> x_star,
                                             std::span<const double> ts);

}  // namespace tlab
