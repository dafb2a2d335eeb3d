#pragma once

// Reconstruction of the trajectory space from the causality table alone, and
// the interior-traced graph it is compared against.

#include <string>
#include <vector>

#include "tlab/causality.hpp"
#include "tlab/local_model.hpp"

namespace tlab {

struct GraphNode {
  OmegaWord label;
  std::vector<BoundaryPoint> witnesses;
};

struct GraphEdge {
  int from, to;
  OmegaWord label;
  std::vector<BoundaryPoint> witnesses;  // exit points in boundary order
};

struct TrajectoryGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  std::vector<int> degrees() const;
  int euler_characteristic() const {
    return static_cast<int>(nodes.size()) - static_cast<int>(edges.size());
  }
};

struct FixedPointEstimate {
  BoundaryPoint point;
  int rows;  // FIXED rows merged into the estimate
};

/// Clusters of FIXED rows, each refined to one boundary point.
std::vector<FixedPointEstimate> detect_fixed_points(const CausalityTable& t);

struct TangencyEstimate {
  BoundaryPoint point;
  int multiplicity;
  int sign;
  int localized_arrows;
  OmegaWord chain_word;
};

/// Interior tangencies located at chain junctions. The localized arrow count
/// of a junction is 1 plus the arrows of its chain that join it to another
/// tangency within four sample spacings; the multiplicity is twice that
/// count. Throws Ambiguous when the count exceeds 1.
std::vector<TangencyEstimate> detect_tangency_chains(const CausalityTable& t);

/// Quotient of the boundary by the iterated causality map. Nodes are the
/// classes of singleton and tangent trajectories; edges are the pieces of the
/// exit arcs between the exits of those trajectories, oriented by increasing
/// arc length.
TrajectoryGraph build_trajectory_graph(const CausalityTable& t);

/// Entry arcs (a whole component counting 0) minus interior tangencies.
int euler_characteristic(const CausalityTable& t);

struct Isomorphism {
  bool found = false;
  std::vector<int> mapping;  // node of g1 -> node of g2
};

/// Label-preserving isomorphism by backtracking with degree and label pruning.
Isomorphism graph_isomorphic(const TrajectoryGraph& g1, const TrajectoryGraph& g2, bool directed = false);

/// Edges reversed and every label mirrored.
TrajectoryGraph reversed(const TrajectoryGraph& g);

/// Nodes and edge labels that violate the degree rules: a (2) node is a leaf,
/// a (121) node is trivalent.
std::vector<std::string> check_degrees(const TrajectoryGraph& g);

/// Graph from the interior: singleton and tangent trajectories are traced and
/// rasterized as walls, and the regions of the remaining grid cells become
/// the edges between the walls they touch.
TrajectoryGraph interior_graph(const Domain2D& d, const VectorField& v, int grid = 320);

/// Causality table of a local model with at most one coefficient, sampled at
/// `samples` coefficient values spread over the box (an odd count hits 0).
/// Simple roots are components parameterized by the coefficient, the double
/// factor is one component parameterized by u minus its centre.
CausalityTable local_model_table(const LocalModel& model, int samples);

std::string graph_dot(const TrajectoryGraph& g, const std::string& name = "trajectories");

}  // namespace tlab
