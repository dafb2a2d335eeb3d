#include "tlab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tlab/error.hpp"

namespace tlab {

namespace {

constexpr double kMinGradient = 1e-6;

Vec2 level_tangent(const Expr& w, Vec2 p) {
  Vec2 g = gradient(w, p);
  double n = norm(g);
  if (!(n >= kMinGradient))
    throw Error(ErrorCode::Degenerate, "gradient of the boundary function vanishes near (" + std::to_string(p.x) +
                                           ", " + std::to_string(p.y) + ")");
  return {g.y / n, -g.x / n};
}

}  // namespace

Vec2 project_to_level(const Expr& w, Vec2 p, int iterations) {
  for (int i = 0; i < iterations; ++i) {
    double value = w.eval(p);
    if (value == 0.0) break;
    Vec2 g = gradient(w, p);
    double gg = dot(g, g);
    if (!(gg > 0.0)) break;
    p = p - (value / gg) * g;
  }
  return p;
}

ClosedCurve::ClosedCurve(Expr w, std::vector<Vec2> samples, double length)
    : w_(std::move(w)), samples_(std::move(samples)), length_(length) {}

double ClosedCurve::wrap(double s) const {
  double r = std::fmod(s, length_);
  if (r < 0.0) r += length_;
  if (r >= length_) r = 0.0;
  return r;
}

Vec2 ClosedCurve::at(double s) const {
  s = wrap(s);
  double pos = s / spacing();
  std::size_t i = std::min(static_cast<std::size_t>(pos), samples_.size() - 1);
  double frac = pos - static_cast<double>(i);
  Vec2 a = samples_[i], b = sample(i + 1);
  return project_to_level(w_, a + frac * (b - a));
}

Vec2 ClosedCurve::tangent(double s) const { return level_tangent(w_, at(s)); }

std::pair<double, double> ClosedCurve::locate(Vec2 p) const {
  std::size_t best = 0;
  double best_d = distance(p, samples_[0]);
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    double d = distance(p, samples_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double s = static_cast<double>(best) * spacing();
  for (int iter = 0; iter < 3; ++iter) {
    Vec2 q = at(s);
    s = wrap(s + dot(p - q, level_tangent(w_, q)));
  }
  return {s, distance(p, at(s))};
}

namespace {

struct CellGrid {
  Box box;
  int n;
  double cx, cy;

  CellGrid(const Box& b, int cells) : box(b), n(cells), cx((b[1] - b[0]) / cells), cy((b[3] - b[2]) / cells) {}

  std::pair<int, int> cell(Vec2 p) const {
    return {std::clamp(static_cast<int>((p.x - box[0]) / cx), 0, n - 1),
            std::clamp(static_cast<int>((p.y - box[2]) / cy), 0, n - 1)};
  }
  Vec2 node(int i, int j) const { return {box[0] + cx * i, box[2] + cy * j}; }
};

Vec2 bisect_edge(const Expr& w, Vec2 a, Vec2 b) {
  bool pa = w.eval(a) > 0.0;
  for (int i = 0; i < 60; ++i) {
    Vec2 m = 0.5 * (a + b);
    if ((w.eval(m) > 0.0) == pa) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

// Continuation along the level set from seed until the curve closes.
std::vector<Vec2> trace_loop(const Expr& w, Vec2 seed, double h, const Box& box) {
  std::vector<Vec2> pts{project_to_level(w, seed, 8)};
  const double perimeter_budget = 40.0 * (box[1] - box[0] + box[3] - box[2]);
  double travelled = 0.0;
  for (;;) {
    Vec2 p = pts.back();
    Vec2 mid = project_to_level(w, p + (0.5 * h) * level_tangent(w, p), 2);
    Vec2 next = project_to_level(w, p + h * level_tangent(w, mid));
    travelled += distance(p, next);
    if (next.x < box[0] || next.x > box[1] || next.y < box[2] || next.y > box[3])
      throw Error(ErrorCode::Degenerate, "boundary component leaves the bounding box");
    if (pts.size() > 8 && distance(next, pts.front()) < 0.75 * h) break;
    if (travelled > perimeter_budget) throw Error(ErrorCode::Degenerate, "boundary tracing did not close");
    pts.push_back(next);
  }
  return pts;
}

ClosedCurve resample(const Expr& w, std::vector<Vec2> fine, int samples) {
  // Start at the rightmost point.
  auto right = std::max_element(fine.begin(), fine.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; });
  std::rotate(fine.begin(), right, fine.end());
  const std::size_t n = fine.size();
  {
    // Refine to where the tangent is vertical, between the two neighbours.
    Vec2 a = fine[n - 1], b = fine[1];
    auto tx = [&](double f) { return level_tangent(w, project_to_level(w, a + f * (b - a))).x; };
    double lo = 0.0, hi = 1.0;
    bool neg_lo = tx(lo) < 0.0;
    if (neg_lo != (tx(hi) < 0.0)) {
      for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((tx(mid) < 0.0) == neg_lo) lo = mid;
        else hi = mid;
      }
      fine[0] = project_to_level(w, a + (0.5 * (lo + hi)) * (b - a));
    }
  }
  // Richardson-corrected segment arc lengths: (4 * two-chord - chord) / 3.
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = fine[i], b = fine[(i + 1) % n];
    Vec2 m = project_to_level(w, 0.5 * (a + b));
    double chord = distance(a, b);
    double two = distance(a, m) + distance(m, b);
    cum[i + 1] = cum[i] + (4.0 * two - chord) / 3.0;
  }
  const double length = cum[n];
  std::vector<Vec2> out;
  out.reserve(samples);
  std::size_t seg = 0;
  for (int k = 0; k < samples; ++k) {
    double s = length * k / samples;
    while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
    double frac = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
    Vec2 a = fine[seg], b = fine[(seg + 1) % n];
    out.push_back(project_to_level(w, a + frac * (b - a)));
  }
  return ClosedCurve(w, std::move(out), length);
}

}  // namespace

std::vector<ClosedCurve> trace_level_set(const Expr& w, const Box& box, int samples, int grid) {
  CellGrid cells(box, grid);
  std::vector<double> xs, ys;
  for (int j = 0; j <= grid; ++j)
    for (int i = 0; i <= grid; ++i) {
      Vec2 p = cells.node(i, j);
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  std::vector<double> vals(xs.size());
  w.eval_batch(xs, ys, vals);
  auto inside = [&](int i, int j) { return vals[static_cast<std::size_t>(j) * (grid + 1) + i] > 0.0; };

  const double h = 0.25 * std::min(cells.cx, cells.cy);
  std::set<std::pair<int, int>> visited;
  std::vector<ClosedCurve> curves;
  auto consider = [&](Vec2 a, Vec2 b) {
    auto c = cells.cell(0.5 * (a + b));
    if (visited.count(c)) return;
    std::vector<Vec2> fine = trace_loop(w, bisect_edge(w, a, b), h, box);
    for (Vec2 p : fine) {
      auto [ci, cj] = cells.cell(p);
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) visited.insert({ci + di, cj + dj});
    }
    curves.push_back(resample(w, std::move(fine), samples));
  };
  for (int j = 0; j <= grid; ++j)
    for (int i = 0; i <= grid; ++i) {
      if (i < grid && inside(i, j) != inside(i + 1, j)) consider(cells.node(i, j), cells.node(i + 1, j));
      if (j < grid && inside(i, j) != inside(i, j + 1)) consider(cells.node(i, j), cells.node(i, j + 1));
    }
  std::sort(curves.begin(), curves.end(), [](const ClosedCurve& a, const ClosedCurve& b) {
    Vec2 pa = a.sample(0), pb = b.sample(0);
    return pa.x != pb.x ? pa.x > pb.x : pa.y < pb.y;
  });
  return curves;
}

}  // namespace tlab
