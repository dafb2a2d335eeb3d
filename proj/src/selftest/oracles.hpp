#pragma once

// Independent reference computations used by the unit tests, the
// acceptance suite and `traverse-lab selftest`. Nothing here calls the code
// paths it is used to check.

#include <random>
#include <string>
#include <vector>

#include "tlab/expr.hpp"
#include "tlab/omega.hpp"
#include "tlab/vec2.hpp"

namespace tlab::oracle {

/// Random well-defined expression over x, y (every function application is
/// guarded so it is finite on all of R^2).
std::string random_expression(std::mt19937_64& rng, int depth);

/// Smooth random planar field with |v| bounded away from zero on [-1,1]^2.
std::pair<std::string, std::string> random_field(std::mt19937_64& rng);

/// Flow of v for time t by classical RK4 with a fixed number of substeps.
Vec2 rk4_flow(const VectorField& v, Vec2 p, double t, int substeps = 64);

/// k-th derivative (k = 1..3) of t -> w(flow_t(p)) at t = 0 from
/// fourth-order central differences with step balanced for order k.
double fd_flow_derivative(const Expr& w, const VectorField& v, Vec2 p, int k);

/// Permutation parity plus ceiling terms, from the explicit permutation.
int brute_force_flip_exponent(const OmegaWord& w);

/// Constant field (1,0) on the unit disk: entry (-a, b) exits at (a, b).
Vec2 disk_chord_exit(Vec2 entry);

/// Depressed monic degree-m polynomial s^m + sum_{l<=m-2} x_l s^l whose
/// roots follow a random pattern of simple roots, double roots and complex
/// pairs inside radius r, built by expanding the product. Returns x_0..x_{m-2}.
/// Patterns with multiple roots sit on positive-codimension strata that
/// uniform sampling of x never hits.
std::vector<double> stratified_depressed_coefficients(std::mt19937_64& rng, int m, double radius);

/// |a - b| / max(|b|, floor).
double relative_error(double a, double b, double floor = 1e-3);

}  // namespace tlab::oracle
