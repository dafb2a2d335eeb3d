#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tlab/error.hpp"
#include "tlab/holography.hpp"
#include "tlab/parallel.hpp"

namespace tlab {

namespace {

constexpr double kFixedTol = 1e-6;

double arc_gap(const CausalityTable& t, const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.component != b.component) return std::numeric_limits<double>::infinity();
  const double len = t.lengths[static_cast<std::size_t>(a.component)];
  double ds = std::fmod(std::fabs(a.s - b.s), len);
  return std::min(ds, len - ds);
}

std::string where(const BoundaryPoint& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "component %d s=%.9g (%.6g, %.6g)", p.component, p.s, p.point.x, p.point.y);
  return buf;
}

}  // namespace

FixedPointCheck check_fixed_points(const Domain2D& d, const VectorField& v, const CausalityTable& t) {
  FixedPointCheck c;
  c.min_displacement = std::numeric_limits<double>::infinity();
  auto fail = [&](std::string msg) {
    c.pass = false;
    if (c.failures.size() < 20) c.failures.push_back(std::move(msg));
  };
  for (const auto& r : t.rows) {
    if (r.fixed) {
      ++c.fixed_rows;
      if (arc_gap(t, r.entry, r.image) > kFixedTol) fail("fixed row moves: " + where(r.entry));
      Stratum s = classify_boundary_point(d, v, r.entry.point);
      if (s.j != 2 || s.sign != -1) fail("fixed row off the (2,-) stratum: " + where(r.entry));
      continue;
    }
    const double gap = arc_gap(t, r.entry, r.image);
    c.min_displacement = std::min(c.min_displacement, gap);
    if (gap <= kFixedTol) fail("non-fixed row maps to itself: " + where(r.entry));
  }
  std::vector<BoundaryPoint> singles;
  for (const auto& p : t.strata.tangencies)
    if (p.stratum.j == 2 && p.stratum.sign == -1) singles.push_back(p);
  c.singleton_tangencies = static_cast<int>(singles.size());
  for (const auto& p : singles) {
    const TableRow* r = find_row(t, p.component, p.s, kFixedTol);
    if (!r || !r->fixed) fail("no fixed row at " + where(p));
  }
  auto detected = detect_fixed_points(t);
  c.detected = static_cast<int>(detected.size());
  if (detected.size() != singles.size()) fail("detected fixed points do not match the (2,-) points");
  for (const auto& e : detected) {
    bool near = std::any_of(singles.begin(), singles.end(),
                            [&](const BoundaryPoint& p) { return arc_gap(t, e.point, p) <= kFixedTol; });
    if (!near) fail("detected fixed point away from the (2,-) points: " + where(e.point));
  }
  if (!std::isfinite(c.min_displacement)) c.min_displacement = -1.0;
  return c;
}

MirrorCheck check_mirror(const Domain2D& d, const VectorField& v, const CausalityTable& t, unsigned jobs) {
  std::vector<const TableRow*> rows;
  for (const auto& r : t.rows)
    if (!r.fixed && r.kind == RowKind::Sample && r.image_multiplicity == 1) rows.push_back(&r);
  const VectorField back = v.negated();
  TraceControls controls;
  controls.keep_states = false;
  std::vector<double> dist(rows.size());
  std::vector<char> word_ok(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    Trajectory tr = trace_trajectory(d, back, rows[i]->image, controls);
    dist[i] = tr.divisor.size() < 2 ? std::numeric_limits<double>::infinity()
                                    : distance(tr.divisor[1].point.point, rows[i]->entry.point);
    word_ok[i] = tr.omega == mirror(rows[i]->word);
  });
  MirrorCheck c;
  c.pairs = static_cast<int>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.worst_distance = std::max(c.worst_distance, dist[i]);
    if (dist[i] > 1e-6) {
      c.pass = false;
      if (c.failures.size() < 20) c.failures.push_back("not inverted at " + where(rows[i]->entry));
    }
    if (!word_ok[i]) {
      c.pass = false;
      ++c.word_mismatches;
      if (c.failures.size() < 20) c.failures.push_back("word not mirrored at " + where(rows[i]->entry));
    }
  }
  return c;
}

std::vector<double> model_sample(const LocalModel& model, std::mt19937_64& rng, int k) {
  const double radius = 0.5 * model.box_radius() * std::pow(0.8, k % 12);
  std::vector<double> x;
  for (int m : model.word().entries()) {
    if (m < 2) continue;
    auto part = oracle::stratified_depressed_coefficients(rng, m, radius);
    x.insert(x.end(), part.begin(), part.end());
  }
  return x;
}

ChainLawCheck check_chain_law(const LocalModel& model, int samples, std::uint64_t seed) {
  ChainLawCheck c;
  const auto& w = model.word();
  c.exact = w.size() == 1;
  c.expected = c.exact ? chain_bound(w[0]) : norm(w) / 2;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    auto x = model_sample(model, rng, k);
    try {
      c.longest = std::max(c.longest, longest_chain(fiber_divisor(model, x)));
      ++c.samples;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IllConditioned) throw;
      ++c.skipped;
    }
  }
  c.pass = c.exact ? c.longest == c.expected : c.longest <= c.expected;
  return c;
}

ModelFixedCheck check_model_fixed_points(const LocalModel& model, int samples, std::uint64_t seed) {
  ModelFixedCheck c;
  c.min_displacement = std::numeric_limits<double>::infinity();
  auto fail = [&](std::string msg) {
    c.pass = false;
    if (c.failures.size() < 20) c.failures.push_back(std::move(msg));
  };
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    auto x = model_sample(model, rng, k);
    Divisor div;
    try {
      div = fiber_divisor(model, x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IllConditioned) throw;
      continue;
    }
    ++c.fibers;
    // Distinct boundary points closer than the tolerance cannot be told
    // apart from a fixed point by distance; only the structural test applies.
    bool resolved = true;
    for (std::size_t i = 1; i < div.size(); ++i) resolved = resolved && div[i].u - div[i - 1].u > kFixedTol;
    if (!resolved) ++c.unresolved;
    auto comps = components(div);
    for (const auto& p : div) {
      ++c.points;
      const bool atom = std::any_of(comps.begin(), comps.end(),
                                    [&](const Interval& iv) { return iv.singleton() && iv.lo == p.u; });
      const bool expect_fixed = atom && p.multiplicity % 2 == 0 && p.polarity == Polarity::Minus;
      if (p.polarity == Polarity::Minus && !atom) continue;  // exit points have no image
      ModelImage img = model_causality(model, x, p.u);
      char buf[64];
      std::snprintf(buf, sizeof buf, "fiber %d u=%.9g", k, p.u);
      if (img.fixed != expect_fixed) fail(std::string(img.fixed ? "unexpected fixed point at " : "missed fixed point at ") + buf);
      if (img.fixed) {
        ++c.fixed;
        if (img.u != p.u) fail(std::string("fixed point moves at ") + buf);
      } else {
        const double gap = std::fabs(img.u - p.u);
        if (gap == 0.0) fail(std::string("non-fixed point maps to itself at ") + buf);
        if (!resolved) continue;
        c.min_displacement = std::min(c.min_displacement, gap);
        if (gap <= kFixedTol) fail(std::string("non-fixed point within tolerance of itself at ") + buf);
      }
    }
  }
  if (c.unresolved * 100 >= c.fibers) fail("more than 1% of the fibers have boundary points closer than 1e-6");
  if (!std::isfinite(c.min_displacement)) c.min_displacement = -1.0;
  return c;
}

FlipCheck check_flip_exponents(int max_norm) {
  FlipCheck c;
  for (const auto& w : enumerate_admissible(max_norm - 1, max_norm)) {
    if (norm(w) > max_norm) continue;
    ++c.words;
    if (flip_sign_exponent(w) != oracle::brute_force_flip_exponent(w)) c.mismatches.push_back(w.to_string());
  }
  return c;
}

GrazeProbe graze_probe(double graze_scale) {
  Domain2D d(Expr::parse("(4 - x^2 - y^2)*(x^2 + y^2 - 1)"), {-2.5, 2.5, -2.5, 2.5});
  d.set_graze_scale(graze_scale);
  const VectorField v = VectorField::constant({1, 0});
  GrazeProbe g;
  for (double offset : {1e-4, 5e-4, 1e-3}) {
    for (double sign : {1.0, -1.0}) {
      const double y = 1.0 + sign * offset;
      BoundaryPoint entry = d.locate({-std::sqrt(4.0 - y * y), y});
      Trajectory tr = trace_trajectory(d, v, entry);
      if (!(tr.omega == OmegaWord{1, 1})) {
        g.pass = false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "chord at y=%.4f traced as (%s)", y, tr.omega.to_string().c_str());
        g.failures.push_back(buf);
      }
    }
  }
  return g;
}

}  // namespace tlab
