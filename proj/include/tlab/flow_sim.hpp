#pragma once

// Trajectories of a planar field through a domain X = {w >= 0}.
//
// Sign convention: with w >= 0 inside, a boundary point is in stratum
// (j, sign) when the first j-1 flow derivatives of w vanish there and the
// j-th has that sign. (1, +) is where the field enters, (1, -) where it
// exits, (2, -) holds the singleton tangencies (the trajectory touches X
// from outside) and (2, +) the interior tangencies.

#include <optional>
#include <string>
#include <vector>

#include "tlab/curve.hpp"
#include "tlab/expr.hpp"
#include "tlab/omega.hpp"

namespace tlab {

struct Stratum {
  int j = 1;
  int sign = 1;  // +1 or -1
};

std::string to_string(Stratum s);

struct BoundaryPoint {
  int component = 0;
  double s = 0.0;
  Vec2 point;
  Stratum stratum;
};

class Domain2D {
public:
  /// Traces the boundary and checks w > 0 somewhere inside. Throws
  /// Degenerate when the boundary is empty or irregular.
  Domain2D(Expr w, Box box, int samples = 2048);

  const Expr& w() const { return w_; }
  const Box& box() const { return box_; }
  double diameter() const { return diameter_; }
  const std::vector<ClosedCurve>& boundary() const { return curves_; }
  const ClosedCurve& component(int i) const { return curves_.at(static_cast<std::size_t>(i)); }

  double tau_boundary() const { return 1e-9 * diameter_; }
  double tau_graze() const { return tau_graze_scale_ * 1e-7 * diameter_; }
  /// Scales the graze tolerance; only the selftest sensitivity probe uses this.
  void set_graze_scale(double scale) { tau_graze_scale_ = scale; }

  /// Nearest boundary point (component, s) to p, with the stratum left default.
  BoundaryPoint locate(Vec2 p) const;
  BoundaryPoint at(int component, double s) const;

private:
  Expr w_;
  Box box_;
  double diameter_;
  double tau_graze_scale_ = 1.0;
  std::vector<ClosedCurve> curves_;
};

/// Stratum of a boundary point from the flow derivatives of w. The k-th
/// derivative counts as zero below 1e-6 |grad w| |v|^k / diam^(k-1).
/// Throws Domain when |w(p)| exceeds the boundary tolerance and Degenerate
/// when no derivative up to order 4 is nonzero.
Stratum classify_boundary_point(const Domain2D& d, const VectorField& v, Vec2 p);

struct DivisorRecord {
  BoundaryPoint point;
  int multiplicity;
  double time;
};

struct Trajectory {
  BoundaryPoint entry;
  std::vector<double> times;
  std::vector<Vec2> states;
  std::vector<DivisorRecord> divisor;
  OmegaWord omega;
  double transit_time = 0.0;
  bool singleton() const { return divisor.size() == 1; }
};

struct TraceControls {
  double time_budget = 100.0;
  /// Upper bound on one integration step as a fraction of diam / |v|.
  double max_step_fraction = 1.0 / 64.0;
  int substeps = 8;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  bool keep_states = true;
};

/// Follows the trajectory from a boundary point in (1,+) or (2,+) (or a
/// (2,-) point, which returns the singleton) to the first transversal exit.
/// Interior minima of w in [-tau_boundary, tau_graze] are recorded as
/// tangencies of multiplicity 2; a deeper minimum is an exit even when no
/// integration sample falls outside X. Throws TimeBudgetExceeded when no exit is
/// reached and Degenerate at a tangency of order three or more.
Trajectory trace_trajectory(const Domain2D& d, const VectorField& v, const BoundaryPoint& entry,
                            const TraceControls& controls = {});

/// First boundary point reached from an interior point p, following v
/// (forward) or -v (backward), with its time. Tangencies along the way are
/// skipped; throws TimeBudgetExceeded.
struct Hit {
  Vec2 point;
  double time;
};
Hit flow_to_boundary(const Domain2D& d, const VectorField& v, Vec2 p, bool forward,
                     const TraceControls& controls = {});

struct BoundaryArc {
  int component;
  double s_begin;
  double s_end;  // > s_begin; may exceed the length when the arc wraps
  int sign;
  bool whole = false;  // the entire component, no tangency on it
};

struct Strata {
  std::vector<BoundaryArc> arcs;
  std::vector<BoundaryPoint> tangencies;  // stratum j = 2, sorted by (component, s)
};

/// Splits every boundary component into arcs where v enters (+) or exits
/// (-), separated by the points where v is tangent. N samples per component.
Strata strata(const Domain2D& d, const VectorField& v, int samples = 2048);

struct TraversingReport {
  bool pass = true;
  int checked = 0;
  std::vector<std::string> failures;
};

/// Integrates forward and backward from up to M interior grid points.
TraversingReport check_traversing(const Domain2D& d, const VectorField& v, int samples = 100,
                                  const TraceControls& controls = {});

struct AlphaInterval {
  std::size_t trajectory;
  double f_entry;
  double f_exit;
  std::vector<double> marks;  // f at every divisor point
};

/// Places each trajectory on the f axis; f must increase along v.
/// Throws MonotonicityViolation when L_v f <= 0 at a sampled state.
std::vector<AlphaInterval> embed_alpha(const std::vector<Trajectory>& trajectories, const VectorField& v,
                                       const Expr& f);

}  // namespace tlab
