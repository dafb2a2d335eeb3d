#include "tlab/causality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"

namespace tlab {

std::string to_string(RowKind k) {
  switch (k) {
    case RowKind::Sample: return "sample";
    case RowKind::Tangent: return "tangent";
    case RowKind::Continuation: return "continuation";
    case RowKind::Fixed: return "fixed";
  }
  return "?";
}

std::vector<double> arc_samples(const BoundaryArc& arc, int n) {
  std::vector<double> out;
  const double len = arc.s_end - arc.s_begin;
  if (arc.whole) {
    for (int k = 0; k < n; ++k) out.push_back(arc.s_begin + len * k / n);
  } else {
    for (int k = 1; k < n; ++k) out.push_back(arc.s_begin + len * k / n);
  }
  return out;
}

namespace {

struct Job {
  RowKind kind;
  BoundaryPoint point;
};

void set_heights(TableRow& row, const std::optional<Expr>& height) {
  if (!height) return;
  row.f_entry = height->eval(row.entry.point);
  row.f_image = height->eval(row.image.point);
}

bool row_less(const TableRow& a, const TableRow& b) {
  if (a.entry.component != b.entry.component) return a.entry.component < b.entry.component;
  if (a.entry.s != b.entry.s) return a.entry.s < b.entry.s;
  return static_cast<int>(a.kind) < static_cast<int>(b.kind);
}

}  // namespace

CausalityTable compute_table(const Domain2D& d, const VectorField& v, const TableOptions& options) {
  if (options.samples < 2) throw Error(ErrorCode::Domain, "causality table needs at least 2 samples per arc");
  CausalityTable table;
  table.samples_per_arc = options.samples;
  for (const auto& c : d.boundary()) table.lengths.push_back(c.length());
  table.strata = strata(d, v, static_cast<int>(d.component(0).size()));

  std::vector<Job> jobs;
  for (const auto& arc : table.strata.arcs) {
    if (arc.sign < 0) continue;
    for (double s : arc_samples(arc, options.samples)) jobs.push_back({RowKind::Sample, d.at(arc.component, s)});
  }
  for (const auto& p : table.strata.tangencies) {
    if (p.stratum.sign < 0) {
      jobs.push_back({RowKind::Fixed, p});
    } else {
      jobs.push_back({RowKind::Continuation, p});
      jobs.push_back({RowKind::Tangent, p});
    }
  }

  TraceControls controls = options.controls;
  controls.keep_states = false;
  std::vector<TableRow> rows(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    TableRow row;
    row.kind = job.kind;
    switch (job.kind) {
      case RowKind::Fixed:
        row.entry = job.point;
        row.fixed = true;
        row.image = job.point;
        row.image_multiplicity = 2;
        row.word = OmegaWord{2};
        break;
      case RowKind::Sample:
      case RowKind::Continuation: {
        Trajectory t = trace_trajectory(d, v, job.point, controls);
        row.entry = t.entry;
        if (t.entry.stratum.j == 2 && t.entry.stratum.sign < 0) {
          row.fixed = true;
          row.image = t.entry;
          row.image_multiplicity = 2;
        } else {
          row.image = t.divisor[1].point;
          row.image_multiplicity = t.divisor[1].multiplicity;
          row.transit_time = t.divisor[1].time;
        }
        row.word = t.omega;
        break;
      }
      case RowKind::Tangent: {
        Hit hit = flow_to_boundary(d, v, job.point.point, false, controls);
        BoundaryPoint entry = d.locate(hit.point);
        entry.point = hit.point;
        Trajectory t = trace_trajectory(d, v, entry, controls);
        row.entry = t.entry;
        row.image = job.point;
        row.image_multiplicity = 2;
        row.transit_time = hit.time;
        row.word = t.omega;
        break;
      }
    }
    set_heights(row, options.height);
    rows[i] = std::move(row);
  });
  std::sort(rows.begin(), rows.end(), row_less);
  table.rows = std::move(rows);
  return table;
}

CausalityTable mirror_table(const Domain2D& d, const VectorField& v, const TableOptions& options) {
  TableOptions o = options;
  if (o.height) o.height = Expr::parse("-(" + o.height->source() + ")");
  return compute_table(d, v.negated(), o);
}

namespace {

double arc_gap(const CausalityTable& t, int component, double a, double b) {
  double L = t.lengths[static_cast<std::size_t>(component)];
  double g = std::fmod(std::fabs(a - b), L);
  return std::min(g, L - g);
}

bool same_point(const CausalityTable& t, const BoundaryPoint& a, const BoundaryPoint& b, double tol) {
  return a.component == b.component && arc_gap(t, a.component, a.s, b.s) <= tol;
}

// Index of the non-fixed row starting at p, if any.
std::optional<std::size_t> successor(const CausalityTable& t, const BoundaryPoint& p) {
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (!t.rows[i].fixed && same_point(t, t.rows[i].entry, p, 1e-9)) return i;
  return std::nullopt;
}

}  // namespace

const TableRow* find_row(const CausalityTable& t, int component, double s, double tol) {
  const TableRow* best = nullptr;
  double best_gap = tol;
  for (const auto& r : t.rows) {
    if (r.entry.component != component) continue;
    double g = arc_gap(t, component, r.entry.s, s);
    if (g <= best_gap) {
      best_gap = g;
      best = &r;
    }
  }
  return best;
}

std::vector<Chain> chains(const CausalityTable& t) {
  std::vector<bool> is_image(t.rows.size(), false);
  std::vector<std::optional<std::size_t>> next(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].fixed) continue;
    next[i] = successor(t, t.rows[i].image);
    if (next[i]) is_image[*next[i]] = true;
  }
  std::vector<Chain> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (is_image[i]) continue;
    Chain c;
    const TableRow& first = t.rows[i];
    c.points.push_back(first.entry);
    std::vector<int> word{first.fixed ? 2 : first.entry.stratum.j};
    std::optional<std::size_t> cur = i;
    while (cur) {
      const TableRow& r = t.rows[*cur];
      c.rows.push_back(*cur);
      if (r.fixed) break;
      c.points.push_back(r.image);
      word.push_back(r.image_multiplicity);
      cur = next[*cur];
      if (c.rows.size() > t.rows.size()) throw Error(ErrorCode::Degenerate, "causality chain does not terminate");
    }
    c.word = OmegaWord(word);
    out.push_back(std::move(c));
  }
  return out;
}

bool reachability_acyclic(const CausalityTable& t) {
  std::vector<std::optional<std::size_t>> next(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (!t.rows[i].fixed) next[i] = successor(t, t.rows[i].image);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::size_t steps = 0;
    for (auto cur = next[i]; cur; cur = next[*cur])
      if (*cur == i || ++steps > t.rows.size()) return false;
  }
  return true;
}

std::string reachability_dot(const CausalityTable& t) {
  std::ostringstream out;
  out << "digraph reachability {\n";
  auto name = [](const BoundaryPoint& p) {
    std::ostringstream s;
    s << "\"c" << p.component << ":" << std::fixed;
    s.precision(6);
    s << p.s << "\"";
    return s.str();
  };
  for (const auto& r : t.rows) {
    if (r.kind == RowKind::Sample) continue;
    out << "  " << name(r.entry) << " [label=\"" << to_string(r.entry.stratum) << "\"];\n";
    if (r.fixed) continue;
    out << "  " << name(r.entry) << " -> " << name(r.image) << ";\n";
  }
  out << "}\n";
  return out.str();
}

int gv_arc_of(const GvRecord& g, const CausalityTable& t, const BoundaryPoint& p) {
  for (const auto& a : g.arcs) {
    if (a.arc.component != p.component) continue;
    if (a.arc.whole) return a.index;
    double L = t.lengths[static_cast<std::size_t>(p.component)];
    double rel = std::fmod(p.s - a.arc.s_begin, L);
    if (rel < 0.0) rel += L;
    if (rel < a.arc.s_end - a.arc.s_begin) return a.index;
  }
  return -1;
}

GvRecord export_gv(const CausalityTable& t) {
  GvRecord g;
  int index = 0;
  for (int c = 0; c < static_cast<int>(t.lengths.size()); ++c) {
    std::vector<BoundaryArc> arcs;
    for (const auto& a : t.strata.arcs)
      if (a.component == c) arcs.push_back(a);
    auto first_plus = std::find_if(arcs.begin(), arcs.end(), [](const BoundaryArc& a) { return a.sign > 0; });
    if (first_plus != arcs.end()) std::rotate(arcs.begin(), first_plus, arcs.end());
    for (const auto& a : arcs) g.arcs.push_back({index++, a});
  }
  auto relative = [&](const BoundaryPoint& p, int arc) {
    const BoundaryArc& a = g.arcs[static_cast<std::size_t>(arc)].arc;
    double L = t.lengths[static_cast<std::size_t>(a.component)];
    double rel = std::fmod(p.s - a.s_begin, L);
    return rel < 0.0 ? rel + L : rel;
  };
  std::map<std::pair<int, int>, GvBlock> blocks;
  for (const auto& ga : g.arcs) {
    if (ga.arc.sign < 0) continue;
    struct Point {
      double s;
      int arc;
      double image;
    };
    std::vector<Point> pts;
    for (const auto& r : t.rows) {
      if (r.kind != RowKind::Sample || r.fixed || r.image_multiplicity != 1) continue;
      if (gv_arc_of(g, t, r.entry) != ga.index) continue;
      int j = gv_arc_of(g, t, r.image);
      pts.push_back({relative(r.entry, ga.index), j, j >= 0 ? relative(r.image, j) : 0.0});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.s < b.s; });
    for (const auto& p : pts) {
      auto& b = blocks[{ga.index, p.arc}];
      b.plus_arc = ga.index;
      b.minus_arc = p.arc;
      b.curve.push_back({p.s, p.image});
    }
    std::vector<double> gaps;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      if (pts[k].arc == pts[k + 1].arc) gaps.push_back(std::fabs(pts[k + 1].image - pts[k].image));
    double median = 0.0;
    if (!gaps.empty()) {
      std::vector<double> sorted = gaps;
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      median = sorted[sorted.size() / 2];
    }
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const Point &a = pts[k], &b = pts[k + 1];
      double gap = std::fabs(b.image - a.image);
      if (a.arc != b.arc || gap > 10.0 * median) {
        g.discontinuities.push_back({ga.index, a.s, b.s, a.arc, b.arc, a.image, b.image});
      } else {
        g.total_variation += gap;
      }
    }
  }
  for (auto& [key, b] : blocks) g.blocks.push_back(std::move(b));
  return g;
}

Vec2 average_direction(const Domain2D& d, const VectorField& v) {
  Vec2 sum;
  for (const auto& c : d.boundary())
    for (Vec2 p : c.samples()) sum = sum + normalized(v.eval(p));
  return normalized(sum);
}

SemicontinuityReport check_semicontinuity(const Domain2D& d, const VectorField& v, const CausalityTable& t) {
  SemicontinuityReport rep;
  const Vec2 dir = average_direction(d, v);
  auto f = [&](Vec2 p) { return dot(p, dir); };
  auto record_gain = [&](double gain, const BoundaryPoint& at) {
    ++rep.pairs;
    rep.worst_gain = std::min(rep.worst_gain, gain);
    if (gain < -1e-9) {
      std::ostringstream msg;
      msg << "height drops by " << -gain << " from (" << at.point.x << ", " << at.point.y << ")";
      rep.failures.push_back(msg.str());
      rep.pass = false;
    }
  };
  for (const auto& r : t.rows) {
    if (r.fixed) continue;
    record_gain(f(r.image.point) - f(r.entry.point), r.entry);
  }

  TraceControls controls;
  controls.keep_states = false;
  rep.worst_discontinuity = std::numeric_limits<double>::infinity();
  for (const auto& r : t.rows) {
    if (r.kind != RowKind::Tangent) continue;
    ++rep.discontinuities;
    const double gain_x = f(r.image.point) - f(r.entry.point);
    const double h = t.lengths[static_cast<std::size_t>(r.entry.component)] / t.samples_per_arc;
    for (int side : {-1, 1}) {
      double g[3];
      for (int k = 0; k < 3; ++k) {
        double delta = h * std::pow(4.0, -(k + 1));
        BoundaryPoint p = d.at(r.entry.component, r.entry.s + side * delta);
        Trajectory tr = trace_trajectory(d, v, p, controls);
        g[k] = f(tr.divisor[1].point.point) - f(tr.entry.point);
        record_gain(g[k], tr.entry);
      }
      // g(d) = L + a sqrt(d) + b d at d, d/4, d/16.
      double bu2 = (g[0] - 3.0 * g[1] + 2.0 * g[2]) / 6.0;
      double au = (g[1] - g[2]) - 3.0 * bu2;
      double limit = g[2] - au - bu2;
      double slack = limit - gain_x;
      rep.worst_discontinuity = std::min(rep.worst_discontinuity, slack);
      if (slack < -1e-6) {
        std::ostringstream msg;
        msg << "one-sided limit of the height gain at (" << r.entry.point.x << ", " << r.entry.point.y << ") is "
            << -slack << " below the gain at the jump";
        rep.failures.push_back(msg.str());
        rep.pass = false;
      }
    }
  }
  if (rep.discontinuities == 0) rep.worst_discontinuity = 0.0;
  return rep;
}

}  // namespace tlab
