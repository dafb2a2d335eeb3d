#include "tlab/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tlab/error.hpp"
#include "tlab/kernels.hpp"

namespace tlab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

ClosedCurve single_loop(const Expr& g, const Box& box) {
  auto loops = trace_level_set(g, box, 2048, 128);
  if (loops.size() != 1)
    throw Error(ErrorCode::Domain, "table curve " + g.source() + " has " + std::to_string(loops.size()) +
                                       " components in its box");
  return std::move(loops.front());
}

}  // namespace

TableCurve::TableCurve(Shape shape, Expr g, Box box, Vec2 centre, double a, double b)
    : shape_(shape), g_(std::move(g)), box_(box), centre_(centre), a_(a), b_(b),
      param_(std::make_shared<const ClosedCurve>(single_loop(g_, box_))) {}

TableCurve TableCurve::circle(Vec2 c, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::Domain, "circle radius must be positive");
  Expr g = Expr::parse(num(r * r) + " - (x - " + num(c.x) + ")^2 - (y - " + num(c.y) + ")^2");
  return TableCurve(Shape::Circle, g, {c.x - 1.25 * r, c.x + 1.25 * r, c.y - 1.25 * r, c.y + 1.25 * r}, c, r, r);
}

TableCurve TableCurve::ellipse(Vec2 c, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::Domain, "ellipse semi-axes must be positive");
  Expr g = Expr::parse("1 - ((x - " + num(c.x) + ")/" + num(a) + ")^2 - ((y - " + num(c.y) + ")/" + num(b) + ")^2");
  return TableCurve(Shape::Ellipse, g, {c.x - 1.25 * a, c.x + 1.25 * a, c.y - 1.25 * b, c.y + 1.25 * b}, c, a, b);
}

TableCurve TableCurve::implicit(const Expr& g, const Box& box) {
  return TableCurve(Shape::Implicit, g, box, {0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3])}, 0.0, 0.0);
}

double TableCurve::value(Vec2 p) const {
  const Vec2 d = p - centre_;
  switch (shape_) {
    case Shape::Circle: return a_ * a_ - dot(d, d);
    case Shape::Ellipse: return 1.0 - (d.x / a_) * (d.x / a_) - (d.y / b_) * (d.y / b_);
    case Shape::Implicit: break;
  }
  return g_.eval(p);
}

Vec2 TableCurve::gradient(Vec2 p) const {
  const Vec2 d = p - centre_;
  switch (shape_) {
    case Shape::Circle: return -2.0 * d;
    case Shape::Ellipse: return {-2.0 * d.x / (a_ * a_), -2.0 * d.y / (b_ * b_)};
    case Shape::Implicit: break;
  }
  return tlab::gradient(g_, p);
}

Vec2 TableCurve::normal(Vec2 p) const { return -1.0 * normalized(gradient(p)); }

Vec2 TableCurve::project(Vec2 p) const {
  if (shape_ == Shape::Circle) return centre_ + (a_ / norm(p - centre_)) * (p - centre_);
  for (int i = 0; i < 6; ++i) {
    double v = value(p);
    if (v == 0.0) break;
    Vec2 g = gradient(p);
    p = p - (v / dot(g, g)) * g;
  }
  return p;
}

BilliardTable::BilliardTable(std::vector<TableCurve> curves) : curves_(std::move(curves)) {
  if (curves_.empty()) throw Error(ErrorCode::Domain, "billiard table needs an outer curve");
  for (std::size_t i = 1; i < curves_.size(); ++i) {
    for (Vec2 p : curves_[i].param().samples()) {
      if (!(curves_[0].value(p) > 0.0))
        throw Error(ErrorCode::Domain, "obstacle " + std::to_string(i) + " is not inside the outer curve");
      for (std::size_t j = 1; j < curves_.size(); ++j)
        if (j != i && !(curves_[j].value(p) < 0.0))
          throw Error(ErrorCode::Domain, "obstacles " + std::to_string(i) + " and " + std::to_string(j) + " meet");
    }
  }
  Box b{1e300, -1e300, 1e300, -1e300};
  for (Vec2 p : curves_[0].param().samples()) {
    b[0] = std::min(b[0], p.x);
    b[1] = std::max(b[1], p.x);
    b[2] = std::min(b[2], p.y);
    b[3] = std::max(b[3], p.y);
  }
  diameter_ = box_diameter(b);
}

BilliardTable BilliardTable::disk(double r) { return BilliardTable({TableCurve::circle({0, 0}, r)}); }

BilliardTable BilliardTable::shell(double outer, double inner) {
  return BilliardTable({TableCurve::circle({0, 0}, outer), TableCurve::circle({0, 0}, inner)});
}

Vec2 BilliardTable::normal(int i, Vec2 p) const {
  Vec2 n = curve(i).normal(p);
  return i == 0 ? n : -1.0 * n;
}

bool BilliardTable::all_circles() const {
  return std::all_of(curves_.begin(), curves_.end(),
                     [](const TableCurve& c) { return c.shape() == TableCurve::Shape::Circle; });
}

Heading heading(const UnitState& st, double tol) {
  if (st.normal < -tol) return Heading::Inward;
  if (st.normal > tol) return Heading::Outward;
  return Heading::Tangent;
}

UnitState make_state(const BilliardTable& t, int curve, Vec2 p, Vec2 u) {
  UnitState st;
  st.curve = curve;
  st.point = t.curve(curve).project(p);
  st.s = t.curve(curve).param().locate(st.point).first;
  st.frame = t.normal(curve, st.point);
  u = normalized(u);
  st.normal = dot(u, st.frame);
  st.tangential = dot(u, perp(st.frame));
  return st;
}

UnitState tau(const UnitState& st) {
  UnitState r = st;
  r.normal = -st.normal;
  return r;
}

namespace {

struct RayEvents {
  std::vector<double> crossings;
  std::vector<double> contacts;  // parameters of tangential contacts
};

// Events of the line p + t u (|u| = 1) with one curve, for t in (t_lo, t_hi).
RayEvents ray_events(const TableCurve& c, Vec2 p, Vec2 u, double t_lo, double t_hi, double graze) {
  RayEvents ev;
  if (c.shape() != TableCurve::Shape::Implicit) {
    // Q(t) = -g(p + t u) scaled to a quadratic A t^2 + B t + C.
    const Vec2 d = p - c.centre();
    const double sx = 1.0 / c.a(), sy = 1.0 / c.b();
    const Vec2 D{d.x * sx, d.y * sy}, U{u.x * sx, u.y * sy};
    const double A = dot(U, U), B = 2.0 * dot(D, U), C = dot(D, D) - 1.0;
    const double t_star = -B / (2.0 * A);
    const Vec2 x_star = D + t_star * U;
    const double q_min = C - B * B / (4.0 * A);
    const Vec2 grad{2.0 * x_star.x * sx, 2.0 * x_star.y * sy};
    const double dist = q_min / norm(grad);
    if (std::fabs(dist) <= graze) {
      if (t_star > t_lo && t_star < t_hi) ev.contacts.push_back(t_star);
      return ev;
    }
    if (q_min > 0.0) return ev;
    const double disc = B * B - 4.0 * A * C;
    const double q = -0.5 * (B + std::copysign(std::sqrt(std::max(disc, 0.0)), B));
    double r1 = q / A, r2 = q != 0.0 ? C / q : -r1;
    if (r1 > r2) std::swap(r1, r2);
    for (double r : {r1, r2})
      if (r > t_lo && r < t_hi) ev.crossings.push_back(r);
    return ev;
  }

  // Implicit curve: sample the part of the line inside the curve's box.
  const Box& b = c.box();
  double lo = t_lo, hi = t_hi;
  for (int axis = 0; axis < 2; ++axis) {
    double pa = axis == 0 ? p.x : p.y, ua = axis == 0 ? u.x : u.y;
    double mn = b[2 * axis], mx = b[2 * axis + 1];
    if (ua == 0.0) {
      if (pa < mn || pa > mx) return ev;
      continue;
    }
    double t0 = (mn - pa) / ua, t1 = (mx - pa) / ua;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  if (!(lo < hi)) return ev;
  const int n = 1024;
  std::vector<double> ts(n + 1), xs(n + 1), ys(n + 1), gs(n + 1);
  for (int k = 0; k <= n; ++k) {
    ts[k] = lo + (hi - lo) * k / n;
    xs[k] = p.x + ts[k] * u.x;
    ys[k] = p.y + ts[k] * u.y;
  }
  c.g().eval_batch(xs, ys, gs);
  auto g_at = [&](double t) { return c.value(p + t * u); };
  auto slope_at = [&](double t) { return dot(c.gradient(p + t * u), u); };
  for (int k = 0; k < n; ++k) {
    if ((gs[k] > 0.0) != (gs[k + 1] > 0.0)) {
      double a = ts[k], z = ts[k + 1];
      bool pa = gs[k] > 0.0;
      for (int i = 0; i < 80 && z - a > 0.0; ++i) {
        double m = 0.5 * (a + z);
        if ((g_at(m) > 0.0) == pa) a = m;
        else z = m;
      }
      ev.crossings.push_back(0.5 * (a + z));
    }
    if (k > 0 && (gs[k] - gs[k - 1]) * (gs[k + 1] - gs[k]) <= 0.0) {
      // Discrete extremum: refine on the directional derivative.
      double a = ts[k - 1], z = ts[k + 1];
      double sa = slope_at(a);
      if ((sa > 0.0) == (slope_at(z) > 0.0)) continue;
      for (int i = 0; i < 80 && z - a > 0.0; ++i) {
        double m = 0.5 * (a + z);
        if ((slope_at(m) > 0.0) == (sa > 0.0)) a = m;
        else z = m;
      }
      double t = 0.5 * (a + z);
      Vec2 x = p + t * u;
      if (std::fabs(c.value(x)) / norm(c.gradient(x)) <= graze) ev.contacts.push_back(t);
    }
  }
  // A contact stands for the pair of crossings it may have produced.
  for (double t : ev.contacts)
    ev.crossings.erase(std::remove_if(ev.crossings.begin(), ev.crossings.end(),
                                      [&](double r) { return std::fabs(r - t) <= 1e-6 * (hi - lo); }),
                       ev.crossings.end());
  std::sort(ev.crossings.begin(), ev.crossings.end());
  return ev;
}

}  // namespace

Scatter scatter(const BilliardTable& t, const UnitState& in) {
  if (heading(in) != Heading::Inward) throw Error(ErrorCode::Domain, "scatter needs an inward state");
  const Vec2 p = in.point;
  const Vec2 u = normalized(in.direction());
  const double eps = 1e-9 * t.diameter();
  const double budget = 10.0 * t.diameter();
  double best = std::numeric_limits<double>::infinity();
  int best_curve = -1;
  std::vector<std::pair<double, int>> contacts;
  for (int i = 0; i < static_cast<int>(t.curves().size()); ++i) {
    RayEvents ev = ray_events(t.curve(i), p, u, eps, budget, t.tau_graze());
    for (double r : ev.crossings)
      if (r < best) {
        best = r;
        best_curve = i;
      }
    if (i != in.curve)
      for (double c : ev.contacts) contacts.push_back({c, i});
  }
  if (best_curve < 0) throw Error(ErrorCode::NoExit, "no boundary hit within the length budget");

  Scatter out;
  out.length = best;
  out.divisor.push_back({in.curve, p, 1, 0.0});
  std::sort(contacts.begin(), contacts.end());
  for (auto [c, i] : contacts)
    if (c < best) out.divisor.push_back({i, t.curve(i).project(p + c * u), 2, c});
  Vec2 exit = p + best * u;
  out.out = make_state(t, best_curve, exit, u);
  out.divisor.push_back({best_curve, out.out.point, 1, best});
  std::vector<int> word;
  for (const auto& d : out.divisor) word.push_back(d.multiplicity);
  out.omega = OmegaWord(word);
  return out;
}

UnitState billiard_map(const BilliardTable& t, const UnitState& in) { return tau(scatter(t, in).out); }

Vec2 Conic::point_at(double angle) const { return centre + Vec2{a * std::cos(angle), b * std::sin(angle)}; }

double Conic::value(Vec2 p) const {
  double x = (p.x - centre.x) / a, y = (p.y - centre.y) / b;
  return x * x + y * y - 1.0;
}

Conic confocal(const Conic& c, double lambda) {
  if (!(lambda < std::min(c.a * c.a, c.b * c.b))) throw Error(ErrorCode::Domain, "confocal parameter too large");
  return {c.centre, std::sqrt(c.a * c.a - lambda), std::sqrt(c.b * c.b - lambda)};
}

Vec2 poncelet_step(const Conic& outer, const Conic& inner, Vec2 p) {
  // Tangent points from the polar line, in coordinates where inner is the unit circle.
  const Vec2 q{(p.x - inner.centre.x) / inner.a, (p.y - inner.centre.y) / inner.b};
  const double qq = dot(q, q);
  if (!(qq > 1.0)) throw Error(ErrorCode::NoTangent, "vertex is not outside the inner conic");
  const double root = std::sqrt(qq - 1.0);
  Vec2 best;
  bool found = false;
  for (double sign : {1.0, -1.0}) {
    Vec2 tn = (1.0 / qq) * (q + (sign * root) * perp(q));
    Vec2 tp{inner.centre.x + inner.a * tn.x, inner.centre.y + inner.b * tn.y};
    if (cross(p - inner.centre, tp - inner.centre) > 0.0) {
      best = tp;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::NoTangent, "no forward tangent from the vertex");
  const Vec2 u = normalized(best - p);
  // Second intersection of the tangent line with outer.
  const Vec2 D{(p.x - outer.centre.x) / outer.a, (p.y - outer.centre.y) / outer.b};
  const Vec2 U{u.x / outer.a, u.y / outer.b};
  const double A = dot(U, U), B = 2.0 * dot(D, U), C = dot(D, D) - 1.0;
  const double disc = std::max(B * B - 4.0 * A * C, 0.0);
  const double qv = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  double t1 = qv / A, t2 = qv != 0.0 ? C / qv : 0.0;
  double t = std::fabs(t1) > std::fabs(t2) ? t1 : t2;
  Vec2 n = D + t * U;
  n = (1.0 / norm(n)) * n;
  return {outer.centre.x + outer.a * n.x, outer.centre.y + outer.b * n.y};
}

PonceletReport poncelet_check(const Conic& outer, const Conic& inner, int k, const std::vector<Vec2>& starts) {
  if (k < 1) throw Error(ErrorCode::Domain, "Poncelet period must be positive");
  PonceletReport rep;
  rep.k = k;
  rep.starts = starts;
  for (Vec2 p0 : starts) {
    Vec2 p = p0;
    double turn = 0.0;
    for (int i = 0; i < k; ++i) {
      Vec2 next = poncelet_step(outer, inner, p);
      double d = std::atan2(cross(p - inner.centre, next - inner.centre), dot(p - inner.centre, next - inner.centre));
      if (d < 0.0) d += 2.0 * std::numbers::pi;
      turn += d;
      p = next;
    }
    rep.residuals.push_back(distance(p, p0));
    rep.winding.push_back(turn);
    rep.worst = std::max(rep.worst, rep.residuals.back());
  }
  return rep;
}

Conic confocal_closure(const Conic& outer, int k) {
  const double top = std::min(outer.a * outer.a, outer.b * outer.b);
  const Vec2 start = outer.point_at(0.0);
  auto excess = [&](double lambda) {
    return poncelet_check(outer, confocal(outer, lambda), k, {start}).winding[0] - 2.0 * std::numbers::pi;
  };
  double lo = 1e-9 * top, hi = top * (1.0 - 1e-9);
  if (!(excess(lo) < 0.0 && excess(hi) > 0.0))
    throw Error(ErrorCode::Degenerate, "no confocal closure of period " + std::to_string(k));
  for (int i = 0; i < 200 && hi - lo > 1e-16 * top; ++i) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return confocal(outer, 0.5 * (lo + hi));
}

std::vector<Line> random_lines(const BilliardTable& t, std::size_t n, std::mt19937_64& rng) {
  const Box& b = t.curve(0).box();
  const Vec2 c{0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3])};
  const double R = 0.5 * t.diameter();
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi), offset(-R, R);
  std::vector<Line> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double th = angle(rng);
    Vec2 d{std::cos(th), std::sin(th)};
    double o = offset(rng);
    out.push_back({c + o * perp(d) - (2.0 * R) * d, d});
  }
  return out;
}

TangencyCensus tangency_census(const BilliardTable& t, const std::vector<Line>& lines) {
  TangencyCensus census;
  census.lines = lines.size();
  const double graze = t.tau_graze();
  const std::size_t n = lines.size();
  const std::size_t nc = t.curves().size();
  // events[i]: (t, kind) with kind 0 crossing, 1 contact.
  std::vector<std::vector<std::pair<double, int>>> events(n);
  if (t.all_circles()) {
    std::vector<double> px(n), py(n), dx(n), dy(n), mid(n), clear(n), half(n);
    for (std::size_t i = 0; i < n; ++i) {
      px[i] = lines[i].point.x;
      py[i] = lines[i].point.y;
      dx[i] = lines[i].direction.x;
      dy[i] = lines[i].direction.y;
    }
    const auto& k = kernels::active();
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& cv = t.curve(static_cast<int>(c));
      k.line_circle({px, py, dx, dy}, {cv.centre().x, cv.centre().y, cv.a()}, {mid, clear, half});
      for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(clear[i]) <= graze) events[i].push_back({mid[i], 1});
        else if (clear[i] < 0.0) {
          events[i].push_back({mid[i] - half[i], 0});
          events[i].push_back({mid[i] + half[i], 0});
        }
      }
    }
  } else {
    const double span = 4.0 * t.diameter();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < nc; ++c) {
        RayEvents ev = ray_events(t.curve(static_cast<int>(c)), lines[i].point, lines[i].direction, -span, span, graze);
        for (double r : ev.crossings) events[i].push_back({r, 0});
        for (double r : ev.contacts) events[i].push_back({r, 1});
      }
  }
  for (auto& ev : events) {
    std::sort(ev.begin(), ev.end());
    std::vector<int> chord_contacts;
    bool inside = false;
    for (const auto& [tv, kind] : ev) {
      if (kind == 0) {
        inside = !inside;
        if (inside) chord_contacts.push_back(0);
      } else if (inside) {
        ++chord_contacts.back();
      } else {
        chord_contacts.push_back(-1);  // singleton chord touching from outside
      }
    }
    for (int c : chord_contacts) {
      int reduced = c < 0 ? 1 : c;
      int m = c < 0 ? 2 : 2 + 2 * c;
      ++census.chords;
      ++census.multiplicity[m];
      ++census.reduced_multiplicity[reduced];
      census.max_multiplicity = std::max(census.max_multiplicity, m);
      census.max_reduced = std::max(census.max_reduced, reduced);
      if (reduced > 2) ++census.violations;
    }
  }
  return census;
}

}  // namespace tlab
