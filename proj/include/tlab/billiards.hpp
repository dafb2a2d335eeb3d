#pragma once

// Straight-line scattering on planar tables: an outer curve with optional
// obstacles inside it. Curves are circles, axis-aligned ellipses or closed
// level sets of an expression.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "tlab/curve.hpp"
#include "tlab/expr.hpp"
#include "tlab/omega.hpp"
#include "tlab/vec2.hpp"

namespace tlab {

/// Closed curve {g = 0} with g > 0 on the enclosed side.
class TableCurve {
public:
  enum class Shape { Circle, Ellipse, Implicit };

  static TableCurve circle(Vec2 centre, double r);
  static TableCurve ellipse(Vec2 centre, double a, double b);
  /// `box` must contain the curve; the level set inside it must be one closed curve.
  static TableCurve implicit(const Expr& g, const Box& box);

  Shape shape() const { return shape_; }
  Vec2 centre() const { return centre_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Expr& g() const { return g_; }
  const ClosedCurve& param() const { return *param_; }
  const Box& box() const { return box_; }

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  /// Unit normal pointing away from the enclosed side.
  Vec2 normal(Vec2 p) const;
  /// Nearest point of the curve (radial for circles, Newton otherwise).
  Vec2 project(Vec2 p) const;

private:
  TableCurve(Shape shape, Expr g, Box box, Vec2 centre, double a, double b);

  Shape shape_;
  Expr g_;
  Box box_;
  Vec2 centre_;
  double a_, b_;
  std::shared_ptr<const ClosedCurve> param_;
};

/// Region inside curve 0 and outside every other curve.
class BilliardTable {
public:
  /// Throws Domain when an obstacle is not strictly inside the outer curve or
  /// two obstacles meet.
  explicit BilliardTable(std::vector<TableCurve> curves);

  static BilliardTable disk(double r);
  static BilliardTable shell(double outer, double inner);

  const std::vector<TableCurve>& curves() const { return curves_; }
  const TableCurve& curve(int i) const { return curves_[static_cast<std::size_t>(i)]; }
  double diameter() const { return diameter_; }
  double tau_graze() const { return 1e-9 * diameter_; }
  /// Outward normal of the table at a point of curve i.
  Vec2 normal(int i, Vec2 p) const;
  bool all_circles() const;

private:
  std::vector<TableCurve> curves_;
  double diameter_;
};

/// Boundary point m with unit direction u = normal n + tangential t, in the
/// outward frame (n, perp(n)) of the table at m.
struct UnitState {
  int curve = 0;
  double s = 0.0;
  Vec2 point;
  Vec2 frame;  // outward unit normal n
  double normal = 0.0;
  double tangential = 0.0;

  Vec2 direction() const { return normal * frame + tangential * perp(frame); }
};

enum class Heading { Inward, Outward, Tangent };

/// Classification by the sign of the normal component, |normal| <= tol is tangent.
Heading heading(const UnitState& st, double tol = 1e-12);

/// State at the point of curve i nearest to p with direction u.
UnitState make_state(const BilliardTable& t, int curve, Vec2 p, Vec2 u);

/// Flips the normal component; an exact involution.
UnitState tau(const UnitState& st);

struct ChordPoint {
  int curve;
  Vec2 point;
  int multiplicity;
  double t;
};

struct Scatter {
  UnitState out;
  std::vector<ChordPoint> divisor;
  OmegaWord omega;
  double length;
};

/// Straight flight from an inward state to the first transversal hit.
/// Contacts within tau_graze of an obstacle with tangent direction are passed
/// through and recorded with multiplicity 2. Throws Domain when the state is
/// not inward and NoExit when no hit is found within 10 diameters.
Scatter scatter(const BilliardTable& t, const UnitState& in);

/// tau of the exit state of scatter: the next inward state.
UnitState billiard_map(const BilliardTable& t, const UnitState& in);

/// Axis-aligned ellipse (circle when a == b), for the Poncelet construction.
struct Conic {
  Vec2 centre;
  double a, b;

  static Conic circle(Vec2 centre, double r) { return {centre, r, r}; }
  Vec2 point_at(double angle) const;
  double value(Vec2 p) const;  // > 0 outside, < 0 inside
};

/// Member of the confocal family of `c` with parameter lambda < b^2.
Conic confocal(const Conic& c, double lambda);

/// Next vertex: from p on outer, along the tangent to inner that turns
/// counter-clockwise about the inner centre. Throws NoTangent when p is not
/// outside inner.
Vec2 poncelet_step(const Conic& outer, const Conic& inner, Vec2 p);

struct PonceletReport {
  int k = 0;
  std::vector<Vec2> starts;
  std::vector<double> residuals;  // |p_k - p_0| per start
  std::vector<double> winding;    // total turning angle about the inner centre, radians
  double worst = 0.0;
};

PonceletReport poncelet_check(const Conic& outer, const Conic& inner, int k, const std::vector<Vec2>& starts);

/// Bisection on lambda for a confocal inner conic whose k-gons close after one
/// turn from the start at angle 0.
Conic confocal_closure(const Conic& outer, int k);

struct Line {
  Vec2 point;
  Vec2 direction;  // unit
};

/// Lines meeting the outer curve's bounding disk, uniform in angle and offset.
std::vector<Line> random_lines(const BilliardTable& t, std::size_t n, std::mt19937_64& rng);

struct TangencyCensus {
  std::size_t lines = 0;
  std::size_t chords = 0;
  std::map<int, std::size_t> multiplicity;          // m(chord) -> count
  std::map<int, std::size_t> reduced_multiplicity;  // m'(chord) -> count
  int max_multiplicity = 0;
  int max_reduced = 0;
  std::size_t violations = 0;  // chords with m' > 2
};

/// Intersects every line with the table and counts the multiplicities of the
/// chords it cuts. Circle-only tables run through the batch kernels.
TangencyCensus tangency_census(const BilliardTable& t, const std::vector<Line>& lines);

}  // namespace tlab
