#pragma once

// Checks shared by scenario runs and the acceptance suite.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tlab/causality.hpp"
#include "tlab/local_model.hpp"

namespace tlab {

struct FixedPointCheck {
  bool pass = true;
  int fixed_rows = 0;
  int singleton_tangencies = 0;  // (2,-) points of the strata
  int detected = 0;              // clusters found from the table alone
  double min_displacement = 0.0; // smallest |C(x) - x| in arc length over non-fixed rows
  std::vector<std::string> failures;
};

/// C(x) = x on the (2,-) points and nowhere else, to 1e-6 in arc length.
FixedPointCheck check_fixed_points(const Domain2D& d, const VectorField& v, const CausalityTable& t);

struct MirrorCheck {
  bool pass = true;
  int pairs = 0;
  double worst_distance = 0.0;
  int word_mismatches = 0;
  std::vector<std::string> failures;
};

/// Traces -v back from every transversal image and expects the entry again,
/// within 1e-6, along the mirrored word.
MirrorCheck check_mirror(const Domain2D& d, const VectorField& v, const CausalityTable& t, unsigned jobs);

/// Coefficient vectors for a local model: each factor of multiplicity >= 2
/// gets a random root pattern inside radius `scale * box_radius / 2`, with the
/// scale shrinking geometrically with k.
std::vector<double> model_sample(const LocalModel& model, std::mt19937_64& rng, int k);

struct ChainLawCheck {
  bool pass = true;
  int samples = 0;
  int skipped = 0;  // ill-conditioned fibers
  int longest = 0;
  int expected = 0;
  bool exact = true;  // single factor: longest must equal expected, else at most expected
};

ChainLawCheck check_chain_law(const LocalModel& model, int samples, std::uint64_t seed);

struct ModelFixedCheck {
  bool pass = true;
  int fibers = 0;
  int points = 0;
  int fixed = 0;
  int unresolved = 0;  // fibers with two boundary points within 1e-6
  double min_displacement = 0.0;
  std::vector<std::string> failures;
};

/// On sampled fibers: model_causality fixes exactly the even atoms.
ModelFixedCheck check_model_fixed_points(const LocalModel& model, int samples, std::uint64_t seed);

struct FlipCheck {
  int words = 0;
  std::vector<std::string> mismatches;
};

/// flip_sign_exponent against the explicit permutation parity on every
/// admissible word of norm at most max_norm.
FlipCheck check_flip_exponents(int max_norm);

struct GrazeProbe {
  bool pass = true;
  std::vector<std::string> failures;
};

/// Chords of the annulus passing 1e-4 .. 1e-3 from the inner circle must be
/// traced as transversal (11) chords.
GrazeProbe graze_probe(double graze_scale);

}  // namespace tlab
