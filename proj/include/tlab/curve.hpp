#pragma once

// Closed components of an implicit curve {w = 0}, traced by continuation
// and stored with a uniform arc-length parameterization.

#include <array>
#include <vector>

#include "tlab/expr.hpp"
#include "tlab/vec2.hpp"

namespace tlab {

/// [x0, x1] x [y0, y1]
using Box = std::array<double, 4>;

inline double box_diameter(const Box& b) { return std::hypot(b[1] - b[0], b[3] - b[2]); }

/// Newton projection of p onto {w = 0} along the gradient.
Vec2 project_to_level(const Expr& w, Vec2 p, int iterations = 4);

class ClosedCurve {
public:
  /// `samples` points at equal arc-length spacing, starting at s = 0.
  ClosedCurve(Expr w, std::vector<Vec2> samples, double length);

  double length() const { return length_; }
  std::size_t size() const { return samples_.size(); }
  double spacing() const { return length_ / static_cast<double>(samples_.size()); }
  const std::vector<Vec2>& samples() const { return samples_; }
  Vec2 sample(std::size_t i) const { return samples_[i % samples_.size()]; }

  /// Reduces s modulo the length into [0, length).
  double wrap(double s) const;
  /// Point at arc length s, interpolated and projected back onto the curve.
  Vec2 at(double s) const;
  /// Unit tangent in the direction of increasing s.
  Vec2 tangent(double s) const;
  /// Arc length of the curve point nearest to p, and that distance.
  std::pair<double, double> locate(Vec2 p) const;

private:
  Expr w_;
  std::vector<Vec2> samples_;
  double length_;
};

/// All closed components of {w = 0} inside the box. Each is oriented with
/// {w > 0} on its left and starts at its rightmost point; components are
/// ordered by that start point (larger x first, then smaller y).
/// Throws Degenerate where |grad w| < 1e-6 on the curve or tracing fails to
/// close.
std::vector<ClosedCurve> trace_level_set(const Expr& w, const Box& box, int samples = 2048,
                                         int grid = 256);

}  // namespace tlab
