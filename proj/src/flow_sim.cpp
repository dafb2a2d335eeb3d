#include "tlab/flow_sim.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "tlab/error.hpp"

namespace tlab {

namespace odeint = boost::numeric::odeint;

std::string to_string(Stratum s) {
  return "d" + std::to_string(s.j) + (s.sign > 0 ? "+" : "-");
}

Domain2D::Domain2D(Expr w, Box box, int samples)
    : w_(std::move(w)), box_(box), diameter_(box_diameter(box)) {
  curves_ = trace_level_set(w_, box_, samples);
  if (curves_.empty()) throw Error(ErrorCode::Degenerate, "boundary function has no zero level set in the box");
  bool witness = false;
  for (int i = 1; i < 32 && !witness; ++i)
    for (int j = 1; j < 32 && !witness; ++j)
      witness = w_.eval(box_[0] + (box_[1] - box_[0]) * i / 32.0, box_[2] + (box_[3] - box_[2]) * j / 32.0) > 0.0;
  if (!witness) throw Error(ErrorCode::Degenerate, "no interior point with w > 0 found");
}

BoundaryPoint Domain2D::locate(Vec2 p) const {
  BoundaryPoint best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    auto [s, dist] = curves_[i].locate(p);
    if (dist < best_d) {
      best_d = dist;
      best.component = static_cast<int>(i);
      best.s = s;
    }
  }
  best.point = component(best.component).at(best.s);
  return best;
}

BoundaryPoint Domain2D::at(int comp, double s) const {
  BoundaryPoint p;
  p.component = comp;
  p.s = component(comp).wrap(s);
  p.point = component(comp).at(p.s);
  return p;
}

Stratum classify_boundary_point(const Domain2D& d, const VectorField& v, Vec2 p) {
  Vec2 g = gradient(d.w(), p);
  double gn = norm(g);
  if (std::fabs(d.w().eval(p)) > d.tau_boundary() * gn)
    throw Error(ErrorCode::Domain, "point is not on the boundary");
  double speed = norm(v.eval(p));
  auto jet = lie_jet(d.w(), v, p, 4);
  double scale = gn * speed;
  for (int k = 1; k <= 4; ++k) {
    if (std::fabs(jet[k]) > 1e-6 * scale) return {k, jet[k] > 0.0 ? 1 : -1};
    scale *= speed / d.diameter();
  }
  throw Error(ErrorCode::Degenerate, "flow derivatives of the boundary function vanish to order 4");
}

namespace {

using State = std::array<double, 2>;

struct Sample {
  double t;
  Vec2 x;
  double w;
  double dw;  // derivative of w along the direction of integration
};

class Walker {
public:
  Walker(const Domain2D& d, const VectorField& v, Vec2 start, double direction, const TraceControls& c, double dt0)
      : d_(d), v_(v), dir_(direction), c_(c),
        stepper_(odeint::make_dense_output(c.abs_tol, c.rel_tol, max_dt(d, v, start, c),
                                           odeint::runge_kutta_dopri5<State>())) {
    stepper_.initialize(State{start.x, start.y}, 0.0, std::min(dt0, max_dt(d, v, start, c)));
  }

  static double max_dt(const Domain2D& d, const VectorField& v, Vec2 p, const TraceControls& c) {
    return c.max_step_fraction * d.diameter() / std::max(norm(v.eval(p)), 1e-12);
  }

  Sample sample(double t, Vec2 x) const {
    Vec2 f = v_.eval(x);
    return {t, x, d_.w().eval(x), dir_ * dot(gradient(d_.w(), x), f)};
  }

  Vec2 state_at(double t) {
    State s;
    stepper_.calc_state(t, s);
    return {s[0], s[1]};
  }

  /// Calls on_pair(a, b) on consecutive samples, all inside one step, until it returns true.
  template <class OnPair>
  void run(OnPair on_pair) {
    auto system = [this](const State& x, State& dx, double) {
      Vec2 f = v_.eval({x[0], x[1]});
      dx[0] = dir_ * f.x;
      dx[1] = dir_ * f.y;
    };
    Sample prev = sample(0.0, {stepper_.current_state()[0], stepper_.current_state()[1]});
    if (on_sample_) on_sample_(prev);
    for (;;) {
      auto [t0, t1] = stepper_.do_step(system);
      for (int k = 1; k <= c_.substeps; ++k) {
        double t = k == c_.substeps ? t1 : t0 + (t1 - t0) * k / c_.substeps;
        Sample next = sample(t, state_at(t));
        if (on_sample_) on_sample_(next);
        if (on_pair(prev, next)) return;
        prev = next;
      }
      if (t1 > c_.time_budget) {
        std::ostringstream msg;
        msg << "no exit within time " << c_.time_budget << " from (" << prev.x.x << ", " << prev.x.y << ")";
        throw Error(ErrorCode::TimeBudgetExceeded, msg.str());
      }
    }
  }

  template <class F>
  double bisect_time(double ta, double tb, F positive_side_is_a) {
    for (int i = 0; i < 80 && tb - ta > 1e-15 * std::max(1.0, tb); ++i) {
      double tm = 0.5 * (ta + tb);
      if (positive_side_is_a(tm)) ta = tm;
      else tb = tm;
    }
    return 0.5 * (ta + tb);
  }

  /// Time in [a, b] where w crosses from positive to non-positive.
  double refine_crossing(const Sample& a, const Sample& b) {
    return bisect_time(a.t, b.t, [&](double t) { return d_.w().eval(state_at(t)) > 0.0; });
  }

  /// Time in [a, b] where dw changes from negative to non-negative.
  double refine_minimum(const Sample& a, const Sample& b) {
    return bisect_time(a.t, b.t, [&](double t) { return sample(t, state_at(t)).dw < 0.0; });
  }

  std::function<void(const Sample&)> on_sample_;

private:
  const Domain2D& d_;
  const VectorField& v_;
  double dir_;
  TraceControls c_;
  odeint::result_of::make_dense_output<odeint::runge_kutta_dopri5<State>>::type stepper_;
};

BoundaryPoint boundary_point(const Domain2D& d, Vec2 x) {
  BoundaryPoint p = d.locate(project_to_level(d.w(), x));
  p.point = project_to_level(d.w(), x);
  return p;
}

}  // namespace

Trajectory trace_trajectory(const Domain2D& d, const VectorField& v, const BoundaryPoint& entry,
                            const TraceControls& controls) {
  Trajectory traj;
  traj.entry = entry;
  traj.entry.stratum = classify_boundary_point(d, v, entry.point);
  const Stratum st = traj.entry.stratum;
  if (st.j == 2 && st.sign < 0) {
    traj.divisor.push_back({traj.entry, 2, 0.0});
    traj.omega = OmegaWord{2};
    traj.times = {0.0};
    traj.states = {entry.point};
    return traj;
  }
  if (st.sign < 0 || st.j > 2)
    throw Error(ErrorCode::Domain, "trajectory must start where the field enters, got " + to_string(st));
  traj.divisor.push_back({traj.entry, st.j, 0.0});

  auto jet = lie_jet(d.w(), v, entry.point, 2);
  double speed = std::max(norm(v.eval(entry.point)), 1e-12);
  double dt0 = Walker::max_dt(d, v, entry.point, controls) / 8.0;
  if (jet[1] > 0.0 && jet[2] < 0.0) dt0 = std::min(dt0, -2.0 * jet[1] / jet[2] / 8.0);
  const double guard = 1e-6 * d.diameter() / speed;
  const double graze = d.tau_graze();

  Walker walker(d, v, entry.point, 1.0, controls, dt0);
  if (controls.keep_states) {
    walker.on_sample_ = [&](const Sample& s) {
      traj.times.push_back(s.t);
      traj.states.push_back(s.x);
    };
  }
  double pending = std::nan("");
  bool exit_now = false;
  walker.run([&](const Sample& a, const Sample& b) {
    if (a.w > 0.0 && b.w <= 0.0) pending = walker.refine_crossing(a, b);
    if (a.dw < 0.0 && b.dw >= 0.0 && a.t >= guard) {
      double tm = walker.refine_minimum(a, b);
      Vec2 xm = walker.state_at(tm);
      double wm = d.w().eval(xm);
      if (wm < -d.tau_boundary()) {
        // The trajectory left X between samples: exit at the crossing.
        if (std::isnan(pending)) pending = walker.refine_crossing(a, walker.sample(tm, xm));
        exit_now = true;
      } else if (wm <= graze) {
        auto lj = lie_jet(d.w(), v, xm, 2);
        double scale = norm(gradient(d.w(), xm)) * speed * speed / d.diameter();
        if (!(std::fabs(lj[2]) > 1e-6 * scale))
          throw Error(ErrorCode::Degenerate, "tangency of order three or more along a trajectory");
        BoundaryPoint bp = boundary_point(d, xm);
        bp.stratum = {2, 1};
        traj.divisor.push_back({bp, 2, tm});
        pending = std::nan("");
      }
    }
    if (!std::isnan(pending) && (b.w < -graze || exit_now)) {
      double tc = pending;
      BoundaryPoint bp = boundary_point(d, walker.state_at(tc));
      bp.stratum = classify_boundary_point(d, v, bp.point);
      traj.divisor.push_back({bp, 1, tc});
      traj.transit_time = tc;
      return true;
    }
    return false;
  });
  std::vector<int> word;
  for (const auto& r : traj.divisor) word.push_back(r.multiplicity);
  traj.omega = OmegaWord(word);
  return traj;
}

Hit flow_to_boundary(const Domain2D& d, const VectorField& v, Vec2 p, bool forward, const TraceControls& controls) {
  Walker walker(d, v, p, forward ? 1.0 : -1.0, controls, Walker::max_dt(d, v, p, controls) / 8.0);
  const double graze = d.tau_graze();
  double pending = std::nan("");
  Hit hit{};
  walker.run([&](const Sample& a, const Sample& b) {
    if (a.w > 0.0 && b.w <= 0.0) pending = walker.refine_crossing(a, b);
    if (b.w > 0.0) pending = std::nan("");
    if (!std::isnan(pending) && b.w < -graze) {
      hit = {project_to_level(d.w(), walker.state_at(pending)), pending};
      return true;
    }
    return false;
  });
  return hit;
}

Strata strata(const Domain2D& d, const VectorField& v, int samples) {
  if (samples < 16) throw Error(ErrorCode::Domain, "strata needs at least 16 samples per component");
  Strata out;
  for (int c = 0; c < static_cast<int>(d.boundary().size()); ++c) {
    const ClosedCurve& curve = d.component(c);
    auto rate = [&](double s) {
      Vec2 p = curve.at(s);
      return dot(gradient(d.w(), p), v.eval(p));
    };
    const double ds = curve.length() / samples;
    std::vector<double> values(samples);
    for (int k = 0; k < samples; ++k) values[k] = rate(k * ds);
    std::vector<BoundaryPoint> found;
    for (int k = 0; k < samples; ++k) {
      double a = values[k], b = values[(k + 1) % samples];
      if ((a > 0.0) == (b > 0.0)) continue;
      double sa = k * ds, sb = (k + 1) * ds;
      bool pa = a > 0.0;
      for (int i = 0; i < 60; ++i) {
        double sm = 0.5 * (sa + sb);
        if ((rate(sm) > 0.0) == pa) sa = sm;
        else sb = sm;
      }
      BoundaryPoint bp = d.at(c, 0.5 * (sa + sb));
      bp.stratum = classify_boundary_point(d, v, bp.point);
      if (bp.stratum.j != 2)
        throw Error(ErrorCode::Degenerate, "tangency point classified as " + to_string(bp.stratum));
      found.push_back(bp);
    }
    std::sort(found.begin(), found.end(), [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.s < b.s; });
    if (found.empty()) {
      out.arcs.push_back({c, 0.0, curve.length(), values[0] > 0.0 ? 1 : -1, true});
    } else {
      for (std::size_t i = 0; i < found.size(); ++i) {
        double s0 = found[i].s;
        double s1 = i + 1 < found.size() ? found[i + 1].s : found[0].s + curve.length();
        out.arcs.push_back({c, s0, s1, rate(0.5 * (s0 + s1)) > 0.0 ? 1 : -1, false});
      }
    }
    out.tangencies.insert(out.tangencies.end(), found.begin(), found.end());
  }
  return out;
}

TraversingReport check_traversing(const Domain2D& d, const VectorField& v, int samples, const TraceControls& controls) {
  TraversingReport report;
  const Box& b = d.box();
  std::vector<Vec2> inside;
  const int g = std::max(4, static_cast<int>(std::ceil(3.0 * std::sqrt(static_cast<double>(samples)))));
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < g; ++i) {
      Vec2 p{b[0] + (b[1] - b[0]) * (i + 0.5) / g, b[2] + (b[3] - b[2]) * (j + 0.5) / g};
      if (d.w().eval(p) > 0.0) inside.push_back(p);
    }
  const std::size_t stride = std::max<std::size_t>(1, inside.size() / static_cast<std::size_t>(samples));
  TraceControls c = controls;
  c.keep_states = false;
  for (std::size_t i = 0; i < inside.size() && report.checked < samples; i += stride) {
    ++report.checked;
    for (bool forward : {true, false}) {
      try {
        flow_to_boundary(d, v, inside[i], forward, c);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << (forward ? "forward" : "backward") << " from (" << inside[i].x << ", " << inside[i].y
            << "): " << e.what();
        report.failures.push_back(msg.str());
        report.pass = false;
      }
    }
  }
  return report;
}

std::vector<AlphaInterval> embed_alpha(const std::vector<Trajectory>& trajectories, const VectorField& v,
                                       const Expr& f) {
  std::vector<AlphaInterval> out;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& t = trajectories[i];
    std::vector<Vec2> probes = t.states;
    for (const auto& r : t.divisor) probes.push_back(r.point.point);
    for (Vec2 p : probes) {
      if (!(lie_jet(f, v, p, 1)[1] > 0.0)) {
        std::ostringstream msg;
        msg << "height function does not increase along the field at (" << p.x << ", " << p.y << ")";
        throw Error(ErrorCode::MonotonicityViolation, msg.str());
      }
    }
    AlphaInterval a{i, f.eval(t.divisor.front().point.point), f.eval(t.divisor.back().point.point), {}};
    for (const auto& r : t.divisor) a.marks.push_back(f.eval(r.point.point));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace tlab
