#pragma once

// The discrete causality map: every sampled entry point mapped to the next
// boundary point along its trajectory.

#include <optional>
#include <string>
#include <vector>

#include "tlab/flow_sim.hpp"

namespace tlab {

enum class RowKind {
  Sample,        // sampled point of an entry arc
  Tangent,       // entry point of a trajectory tangent to the boundary inside
  Continuation,  // interior tangency point, mapped onward along its trajectory
  Fixed,         // singleton tangency, mapped to itself
};

std::string to_string(RowKind k);

struct TableRow {
  RowKind kind;
  BoundaryPoint entry;
  bool fixed = false;
  BoundaryPoint image;
  int image_multiplicity = 1;
  double transit_time = 0.0;
  OmegaWord word;  // multiplicities of the traced trajectory from the entry on
  std::optional<double> f_entry, f_image;
};

struct CausalityTable {
  int samples_per_arc = 0;
  std::vector<double> lengths;  // per boundary component
  Strata strata;
  std::vector<TableRow> rows;  // sorted by (component, s)
};

struct TableOptions {
  int samples = 2048;
  std::optional<Expr> height;
  unsigned jobs = 1;
  TraceControls controls;
};

/// Arc positions of the samples on an entry arc of length L starting at s0:
/// s0 + L k / N for k = 1 .. N-1 (k = 0 .. N-1 on a whole component), so the
/// sample set for N is contained in the one for 2N.
std::vector<double> arc_samples(const BoundaryArc& arc, int n);

CausalityTable compute_table(const Domain2D& d, const VectorField& v, const TableOptions& options = {});

/// Table of the reversed field -v (with the height negated when present).
CausalityTable mirror_table(const Domain2D& d, const VectorField& v, const TableOptions& options = {});

/// Row whose entry is within tol of (component, s), or nullptr.
const TableRow* find_row(const CausalityTable& t, int component, double s, double tol = 1e-6);

struct Chain {
  std::vector<std::size_t> rows;
  std::vector<BoundaryPoint> points;
  OmegaWord word;
  int arrows() const { return static_cast<int>(points.size()) - 1; }
};

/// Maximal chains x1 -> C(x1) -> C(C(x1)) ... starting at entry points that
/// are not themselves images. Fixed rows give zero-arrow chains.
std::vector<Chain> chains(const CausalityTable& t);

/// True when following images never revisits a point (ignoring fixed rows).
bool reachability_acyclic(const CausalityTable& t);

/// Reachability between tangency points and the entries that lead to them, as DOT.
std::string reachability_dot(const CausalityTable& t);

struct GvArc {
  int index;  // per component from an entry arc: entry arcs even, exit arcs odd
  BoundaryArc arc;
};

struct GvBlock {
  int plus_arc;
  int minus_arc;
  std::vector<std::pair<double, double>> curve;  // (s - start of entry arc, s' - start of exit arc)
};

struct GvDiscontinuity {
  int plus_arc;
  double s_left, s_right;  // arc positions of the samples on either side
  int left_arc, right_arc;
  double left_image, right_image;
};

struct GvRecord {
  std::vector<GvArc> arcs;
  std::vector<GvBlock> blocks;
  std::vector<GvDiscontinuity> discontinuities;
  double total_variation = 0.0;
};

/// Arcs-by-arcs block structure of the sampled map from entry to exit arcs.
/// A jump between neighbouring samples larger than 10 times the median gap,
/// or a change of exit arc, is a discontinuity.
GvRecord export_gv(const CausalityTable& t);

/// Index of the Gv arc holding the boundary point, or -1.
int gv_arc_of(const GvRecord& g, const CausalityTable& t, const BoundaryPoint& p);

struct SemicontinuityReport {
  bool pass = true;
  int pairs = 0;
  int discontinuities = 0;
  double worst_gain = 0.0;            // min over rows of f(image) - f(entry)
  double worst_discontinuity = 0.0;   // min over jumps of (one-sided limit - value at the jump point)
  std::vector<std::string> failures;
};

/// Average field direction over the boundary samples, normalized.
Vec2 average_direction(const Domain2D& d, const VectorField& v);

/// Checks f(C(y)) - f(y) >= -1e-9 on every row, with f the height along the
/// average field direction, and at each tangent entry x that the gain of the
/// points y approaching x from either side does not drop below the gain at x
/// by more than 1e-6. One-sided limits are extrapolated from probes at
/// shrinking distances with the expansion a + b sqrt(d) + c d.
SemicontinuityReport check_semicontinuity(const Domain2D& d, const VectorField& v, const CausalityTable& t);

}  // namespace tlab
