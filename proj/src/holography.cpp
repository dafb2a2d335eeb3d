#include "tlab/holography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <boost/pending/disjoint_sets.hpp>

#include "tlab/error.hpp"

namespace tlab {

std::vector<int> TrajectoryGraph::degrees() const {
  std::vector<int> deg(nodes.size(), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.from)];
    ++deg[static_cast<std::size_t>(e.to)];
  }
  return deg;
}

namespace {

double gap(const CausalityTable& t, const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.component != b.component) return std::numeric_limits<double>::infinity();
  double L = t.lengths[static_cast<std::size_t>(a.component)];
  double g = std::fmod(std::fabs(a.s - b.s), L);
  return std::min(g, L - g);
}

double spacing(const CausalityTable& t, int component) {
  return t.lengths[static_cast<std::size_t>(component)] / t.samples_per_arc;
}

double relative(const CausalityTable& t, const BoundaryArc& arc, double s) {
  double L = t.lengths[static_cast<std::size_t>(arc.component)];
  double r = std::fmod(s - arc.s_begin, L);
  return r < 0.0 ? r + L : r;
}

bool on_arc(const CausalityTable& t, const BoundaryArc& arc, const BoundaryPoint& p) {
  if (p.component != arc.component) return false;
  if (arc.whole) return true;
  double r = relative(t, arc, p.s);
  return r > 0.0 && r < arc.s_end - arc.s_begin;
}

}  // namespace

std::vector<FixedPointEstimate> detect_fixed_points(const CausalityTable& t) {
  std::vector<const TableRow*> fixed;
  for (const auto& r : t.rows)
    if (r.fixed) fixed.push_back(&r);
  std::vector<FixedPointEstimate> out;
  std::vector<bool> used(fixed.size(), false);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (used[i]) continue;
    std::vector<const TableRow*> cluster{fixed[i]};
    used[i] = true;
    const double radius = 2.0 * spacing(t, fixed[i]->entry.component);
    for (std::size_t j = i + 1; j < fixed.size(); ++j)
      if (!used[j] && gap(t, fixed[i]->entry, fixed[j]->entry) <= radius) {
        cluster.push_back(fixed[j]);
        used[j] = true;
      }
    // Median member stands for the cluster.
    std::sort(cluster.begin(), cluster.end(), [](auto a, auto b) { return a->entry.s < b->entry.s; });
    out.push_back({cluster[cluster.size() / 2]->entry, static_cast<int>(cluster.size())});
  }
  return out;
}

std::vector<TangencyEstimate> detect_tangency_chains(const CausalityTable& t) {
  const auto cs = chains(t);
  std::vector<TangencyEstimate> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const TableRow& row = t.rows[i];
    if (row.kind != RowKind::Continuation) continue;
    const Chain* best = nullptr;
    for (const auto& c : cs)
      if (std::find(c.rows.begin(), c.rows.end(), i) != c.rows.end() && (!best || c.points.size() > best->points.size()))
        best = &c;
    if (!best) throw Error(ErrorCode::Degenerate, "continuation row outside every chain");
    std::size_t k = 0;
    while (k < best->points.size() && gap(t, best->points[k], row.entry) > 1e-9) ++k;
    const double radius = 4.0 * spacing(t, row.entry.component);
    int localized = 1;
    for (std::size_t j = k; j + 1 < best->points.size() && best->word[j + 1] >= 2; ++j)
      if (gap(t, best->points[j + 1], best->points[j]) <= radius) ++localized;
      else break;
    for (std::size_t j = k; j > 0 && best->word[j - 1] >= 2; --j)
      if (gap(t, best->points[j - 1], best->points[j]) <= radius) ++localized;
      else break;
    if (localized > 1) {
      std::ostringstream msg;
      msg << "chain through (" << row.entry.point.x << ", " << row.entry.point.y << ") has " << localized
          << " localized arrows";
      throw Error(ErrorCode::Ambiguous, msg.str());
    }
    out.push_back({row.entry, 2 * localized, 1, localized, best->word});
  }
  return out;
}

int euler_characteristic(const CausalityTable& t) {
  int arcs = 0;
  for (const auto& a : t.strata.arcs)
    if (a.sign > 0 && !a.whole) ++arcs;
  return arcs - static_cast<int>(detect_tangency_chains(t).size());
}

TrajectoryGraph build_trajectory_graph(const CausalityTable& t) {
  const auto cs = chains(t);
  // Chains of singleton and tangent trajectories, merged when they share a point.
  std::vector<std::size_t> special;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t r : cs[i].rows)
      if (t.rows[r].kind == RowKind::Fixed || t.rows[r].kind == RowKind::Continuation) {
        special.push_back(i);
        break;
      }
  boost::disjoint_sets_with_storage<> sets(special.size());
  for (std::size_t a = 0; a < special.size(); ++a)
    for (std::size_t b = a + 1; b < special.size(); ++b)
      for (const auto& p : cs[special[a]].points)
        for (const auto& q : cs[special[b]].points)
          if (gap(t, p, q) <= 1e-9) sets.union_set(a, b);

  TrajectoryGraph g;
  std::map<std::size_t, int> node_of_root;
  for (std::size_t a = 0; a < special.size(); ++a) {
    std::size_t root = sets.find_set(a);
    auto [it, fresh] = node_of_root.try_emplace(root, static_cast<int>(g.nodes.size()));
    if (fresh) g.nodes.push_back({});
    GraphNode& n = g.nodes[static_cast<std::size_t>(it->second)];
    const Chain& c = cs[special[a]];
    if (c.word.size() > n.label.size()) n.label = c.word;
    for (const auto& p : c.points)
      if (std::none_of(n.witnesses.begin(), n.witnesses.end(), [&](const BoundaryPoint& q) { return gap(t, p, q) <= 1e-9; }))
        n.witnesses.push_back(p);
  }

  auto node_at = [&](const BoundaryPoint& p) {
    for (std::size_t n = 0; n < g.nodes.size(); ++n)
      for (const auto& q : g.nodes[n].witnesses)
        if (gap(t, p, q) <= 1e-6) return static_cast<int>(n);
    return -1;
  };

  for (const auto& arc : t.strata.arcs) {
    if (arc.sign > 0) continue;
    const double len = arc.whole ? t.lengths[static_cast<std::size_t>(arc.component)] : arc.s_end - arc.s_begin;
    // Exits of special trajectories along the arc.
    std::vector<std::pair<double, int>> marks;
    for (std::size_t n = 0; n < g.nodes.size(); ++n)
      for (const auto& p : g.nodes[n].witnesses)
        if (p.stratum.j == 1 && on_arc(t, arc, p)) marks.push_back({relative(t, arc, p.s), static_cast<int>(n)});
    std::sort(marks.begin(), marks.end());
    if (!arc.whole) {
      BoundaryPoint b, e;
      b.component = e.component = arc.component;
      b.s = arc.s_begin;
      e.s = std::fmod(arc.s_end, t.lengths[static_cast<std::size_t>(arc.component)]);
      int nb = node_at(b), ne = node_at(e);
      if (nb < 0 || ne < 0) throw Error(ErrorCode::Degenerate, "exit arc ends at no detected tangency");
      marks.insert(marks.begin(), {0.0, nb});
      marks.push_back({len, ne});
    } else if (marks.empty()) {
      g.nodes.push_back({OmegaWord{1, 1}, {}});
      marks.push_back({0.0, static_cast<int>(g.nodes.size()) - 1});
    }
    if (arc.whole) marks.push_back({marks.front().first + len, marks.front().second});

    std::vector<std::pair<double, const TableRow*>> exits;
    for (const auto& r : t.rows)
      if (r.kind == RowKind::Sample && !r.fixed && r.image_multiplicity == 1 && on_arc(t, arc, r.image)) {
        double rel = relative(t, arc, r.image.s);
        if (arc.whole && rel < marks.front().first) rel += len;
        exits.push_back({rel, &r});
      }
    std::sort(exits.begin(), exits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
      GraphEdge e{marks[k].second, marks[k + 1].second, OmegaWord{1, 1}, {}};
      std::map<OmegaWord, int> votes;
      for (const auto& [rel, r] : exits)
        if (rel > marks[k].first && rel < marks[k + 1].first) {
          e.witnesses.push_back(r->image);
          ++votes[r->word];
        }
      if (!votes.empty())
        e.label = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
                    return a.second < b.second;
                  })->first;
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

namespace {

using EdgeKey = std::pair<int, int>;
using EdgeBook = std::map<EdgeKey, std::vector<OmegaWord>>;

EdgeBook edge_book(const TrajectoryGraph& g, bool directed) {
  EdgeBook book;
  for (const auto& e : g.edges) {
    EdgeKey k{e.from, e.to};
    if (!directed && k.first > k.second) std::swap(k.first, k.second);
    book[k].push_back(e.label);
  }
  for (auto& [k, labels] : book) std::sort(labels.begin(), labels.end());
  return book;
}

const std::vector<OmegaWord>& labels_between(const EdgeBook& book, int a, int b, bool directed) {
  static const std::vector<OmegaWord> none;
  EdgeKey k{a, b};
  if (!directed && k.first > k.second) std::swap(k.first, k.second);
  auto it = book.find(k);
  return it == book.end() ? none : it->second;
}

}  // namespace

Isomorphism graph_isomorphic(const TrajectoryGraph& g1, const TrajectoryGraph& g2, bool directed) {
  Isomorphism result;
  const std::size_t n = g1.nodes.size();
  if (n != g2.nodes.size() || g1.edges.size() != g2.edges.size()) return result;
  const auto d1 = g1.degrees(), d2 = g2.degrees();
  const EdgeBook b1 = edge_book(g1, directed), b2 = edge_book(g2, directed);

  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d1[a] > d1[b]; });

  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t k) {
    if (k == n) return true;
    const int a = order[k];
    for (std::size_t b = 0; b < n; ++b) {
      if (used[b] || d1[a] != d2[b] || !(g1.nodes[a].label == g2.nodes[b].label)) continue;
      map[a] = static_cast<int>(b);
      bool ok = true;
      for (std::size_t j = 0; j <= k && ok; ++j) {
        const int c = order[j];
        ok = labels_between(b1, a, c, directed) == labels_between(b2, map[a], map[c], directed) &&
             (!directed || labels_between(b1, c, a, directed) == labels_between(b2, map[c], map[a], directed));
      }
      if (ok) {
        used[b] = true;
        if (extend(k + 1)) return true;
        used[b] = false;
      }
      map[a] = -1;
    }
    return false;
  };
  result.found = extend(0);
  if (result.found) result.mapping = map;
  return result;
}

TrajectoryGraph reversed(const TrajectoryGraph& g) {
  TrajectoryGraph r = g;
  for (auto& n : r.nodes) n.label = mirror(n.label);
  for (auto& e : r.edges) {
    std::swap(e.from, e.to);
    e.label = mirror(e.label);
    std::reverse(e.witnesses.begin(), e.witnesses.end());
  }
  return r;
}

std::vector<std::string> check_degrees(const TrajectoryGraph& g) {
  std::vector<std::string> out;
  const auto deg = g.degrees();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& label = g.nodes[i].label;
    int want = label == OmegaWord{2} ? 1 : label == OmegaWord{1, 2, 1} ? 3 : -1;
    if (want >= 0 && deg[i] != want)
      out.push_back("node " + std::to_string(i) + " (" + label.to_string() + ") has degree " + std::to_string(deg[i]));
  }
  for (const auto& e : g.edges)
    if (!(e.label == OmegaWord{1, 1}))
      out.push_back("edge " + std::to_string(e.from) + "-" + std::to_string(e.to) + " labelled " + e.label.to_string());
  return out;
}

TrajectoryGraph interior_graph(const Domain2D& d, const VectorField& v, int grid) {
  const Strata st = strata(d, v, static_cast<int>(d.component(0).size()));
  struct Wall {
    OmegaWord word;
    std::vector<Vec2> path;
    std::vector<BoundaryPoint> points;
  };
  std::vector<Wall> walls;
  TraceControls controls;
  for (const auto& p : st.tangencies) {
    if (p.stratum.sign < 0) {
      walls.push_back({OmegaWord{2}, {p.point}, {p}});
      continue;
    }
    bool covered = std::any_of(walls.begin(), walls.end(), [&](const Wall& w) {
      return std::any_of(w.points.begin(), w.points.end(), [&](const BoundaryPoint& q) { return distance(q.point, p.point) < 1e-6; });
    });
    if (covered) continue;
    Hit hit = flow_to_boundary(d, v, p.point, false, controls);
    BoundaryPoint entry = d.locate(hit.point);
    entry.point = hit.point;
    Trajectory tr = trace_trajectory(d, v, entry, controls);
    Wall w{tr.omega, tr.states, {}};
    for (const auto& rec : tr.divisor) w.points.push_back(rec.point);
    walls.push_back(std::move(w));
  }

  const Box& box = d.box();
  const double hx = (box[1] - box[0]) / grid, hy = (box[3] - box[2]) / grid;
  const double h = std::max(hx, hy);
  auto centre = [&](int i, int j) { return Vec2{box[0] + (i + 0.5) * hx, box[2] + (j + 0.5) * hy}; };
  std::vector<double> xs, ys;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      Vec2 c = centre(i, j);
      xs.push_back(c.x);
      ys.push_back(c.y);
    }
  std::vector<double> w(xs.size());
  d.w().eval_batch(xs, ys, w);
  std::vector<int> wall(xs.size(), -1);
  auto mark = [&](Vec2 a, Vec2 b, double r, int id) {
    int i0 = std::max(0, static_cast<int>((std::min(a.x, b.x) - r - box[0]) / hx) - 1);
    int i1 = std::min(grid - 1, static_cast<int>((std::max(a.x, b.x) + r - box[0]) / hx) + 1);
    int j0 = std::max(0, static_cast<int>((std::min(a.y, b.y) - r - box[2]) / hy) - 1);
    int j1 = std::min(grid - 1, static_cast<int>((std::max(a.y, b.y) + r - box[2]) / hy) + 1);
    Vec2 ab = b - a;
    double ll = dot(ab, ab);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        Vec2 c = centre(i, j);
        double f = ll > 0.0 ? std::clamp(dot(c - a, ab) / ll, 0.0, 1.0) : 0.0;
        auto& cell = wall[static_cast<std::size_t>(j) * grid + i];
        if (cell < 0 && distance(c, a + f * ab) <= r) cell = id;
      }
  };
  for (std::size_t n = 0; n < walls.size(); ++n) {
    const auto& path = walls[n].path;
    if (path.size() == 1) mark(path[0], path[0], 1.5 * h, static_cast<int>(n));
    for (std::size_t k = 0; k + 1 < path.size(); ++k) mark(path[k], path[k + 1], 0.75 * h, static_cast<int>(n));
  }

  TrajectoryGraph g;
  for (const auto& wl : walls) g.nodes.push_back({wl.word, wl.points});
  std::vector<int> region(xs.size(), -1);
  const std::size_t min_cells = 10;
  int next_region = 0;
  for (std::size_t start = 0; start < xs.size(); ++start) {
    if (region[start] >= 0 || wall[start] >= 0 || !(w[start] > 0.0)) continue;
    std::vector<std::size_t> cells{start};
    region[start] = next_region;
    std::vector<int> touches;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      int i = static_cast<int>(cells[k] % grid), j = static_cast<int>(cells[k] / grid);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int q = 0; q < 4; ++q) {
        int a = i + di[q], b = j + dj[q];
        if (a < 0 || b < 0 || a >= grid || b >= grid) continue;
        std::size_t idx = static_cast<std::size_t>(b) * grid + a;
        if (wall[idx] >= 0) {
          if (std::find(touches.begin(), touches.end(), wall[idx]) == touches.end()) touches.push_back(wall[idx]);
        } else if (region[idx] < 0 && w[idx] > 0.0) {
          region[idx] = next_region;
          cells.push_back(idx);
        }
      }
    }
    ++next_region;
    if (cells.size() < min_cells) continue;
    if (touches.empty() || touches.size() > 2) {
      std::ostringstream msg;
      msg << "interior region with " << cells.size() << " cells touches " << touches.size() << " special trajectories";
      throw Error(ErrorCode::Degenerate, msg.str());
    }
    std::sort(touches.begin(), touches.end());
    GraphEdge e{touches.front(), touches.back(), {}, {}};
    for (std::size_t pick : {cells.size() / 2, cells.size() / 3, 2 * cells.size() / 3}) {
      try {
        std::size_t c = cells[pick];
        Hit back = flow_to_boundary(d, v, {xs[c], ys[c]}, false, controls);
        BoundaryPoint entry = d.locate(back.point);
        entry.point = back.point;
        Trajectory tr = trace_trajectory(d, v, entry, controls);
        e.label = tr.omega;
        e.witnesses.push_back(tr.divisor.back().point);
        break;
      } catch (const Error&) {
      }
    }
    if (e.label.empty()) throw Error(ErrorCode::Degenerate, "no trajectory traced through an interior region");
    g.edges.push_back(std::move(e));
  }
  return g;
}

CausalityTable local_model_table(const LocalModel& model, int samples) {
  if (model.dimension() > 1) throw Error(ErrorCode::Domain, "local model table needs at most one coefficient");
  if (samples < 1) throw Error(ErrorCode::Domain, "local model table needs at least one sample");
  const auto& word = model.word();
  const auto& centres = model.centres();
  const double r = model.box_radius();
  const double reach = std::max(r, std::sqrt(r));

  CausalityTable t;
  t.samples_per_arc = samples;
  t.lengths.assign(word.size(), 8.0 * reach + 1.0);

  auto factor_of = [&](double u) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < centres.size(); ++i)
      if (std::fabs(u - centres[i]) < std::fabs(u - centres[best])) best = i;
    return best;
  };
  for (int k = 0; k < samples; ++k) {
    const double x0 = samples == 1 ? 0.0 : r * (2.0 * k / (samples - 1) - 1.0);
    std::vector<double> x;
    if (model.dimension() == 1) x.push_back(x0);
    const Divisor div = fiber_divisor(model, x);
    std::vector<BoundaryPoint> pts;
    for (const auto& dp : div) {
      std::size_t i = factor_of(dp.u);
      BoundaryPoint b;
      b.component = static_cast<int>(i);
      b.s = word[i] >= 2 ? dp.u - centres[i] : x0;
      b.point = {dp.u, x0};
      b.stratum = {dp.multiplicity, dp.polarity == Polarity::Plus ? 1 : -1};
      pts.push_back(b);
      if (dp.multiplicity >= 2) t.strata.tangencies.push_back(b);
    }
    for (std::size_t j = 0; j < div.size(); ++j) {
      const bool entry = div[j].polarity == Polarity::Plus;
      if (!entry && div[j].multiplicity < 2) continue;
      TableRow row;
      row.entry = pts[j];
      ModelImage img = model_causality(model, x, div[j].u);
      if (img.fixed) {
        row.kind = RowKind::Fixed;
        row.fixed = true;
        row.image = pts[j];
        row.image_multiplicity = div[j].multiplicity;
        row.word = OmegaWord{div[j].multiplicity};
      } else {
        std::size_t m = j + 1;
        while (m < div.size() && std::fabs(div[m].u - img.u) > 1e-12 * (1.0 + std::fabs(img.u))) ++m;
        if (m == div.size()) throw Error(ErrorCode::Degenerate, "model image is not a root of the fiber");
        row.image = pts[m];
        row.image_multiplicity = div[m].multiplicity;
        row.kind = div[j].multiplicity >= 2 ? RowKind::Continuation
                   : div[m].multiplicity >= 2 ? RowKind::Tangent
                                              : RowKind::Sample;
        row.transit_time = div[m].u - div[j].u;
        row.word = OmegaWord{div[j].multiplicity, div[m].multiplicity};
      }
      t.rows.push_back(std::move(row));
    }
  }
  std::sort(t.rows.begin(), t.rows.end(), [](const TableRow& a, const TableRow& b) {
    return a.entry.component != b.entry.component ? a.entry.component < b.entry.component : a.entry.s < b.entry.s;
  });
  return t;
}

std::string graph_dot(const TrajectoryGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out << "  n" << i << " [label=\"(" << g.nodes[i].label.to_string() << ")\"];\n";
  for (const auto& e : g.edges)
    out << "  n" << e.from << " -> n" << e.to << " [label=\"(" << e.label.to_string() << ")\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace tlab
