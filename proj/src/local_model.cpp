#include "tlab/local_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tlab/error.hpp"
#include "tlab/poly.hpp"

namespace tlab {

char to_char(Polarity p) { return p == Polarity::Plus ? '+' : '-'; }

LocalModel::LocalModel(OmegaWord word, std::vector<double> centres, double box_radius, double transverse_radius)
    : word_(std::move(word)), centres_(std::move(centres)), box_(box_radius), transverse_(transverse_radius) {
  if (word_.empty()) throw Error(ErrorCode::Domain, "local model needs a non-empty word");
  if (centres_.size() != word_.size())
    throw Error(ErrorCode::SizeMismatch, "one centre per word entry is required");
  if (!(box_ > 0.0) || !(transverse_ > 0.0)) throw Error(ErrorCode::Domain, "radii must be positive");
  for (std::size_t i = 1; i < centres_.size(); ++i)
    if (!(centres_[i - 1] < centres_[i])) throw Error(ErrorCode::Domain, "centres must be strictly increasing");

  offsets_.push_back(0);
  for (std::size_t i = 0; i < word_.size(); ++i) {
    int w = word_[i];
    offsets_.push_back(offsets_.back() + static_cast<std::size_t>(w - 1));
    // Fujiwara: every root of s^w + sum_l x_l s^l has |s| <= 2 max_l |x_l|^{1/(w-l)}.
    double r = 0.0;
    for (int l = 0; l + 2 <= w; ++l) r = std::max(r, 2.0 * std::pow(box_, 1.0 / (w - l)));
    cluster_.push_back(r);
  }
  for (std::size_t i = 1; i < centres_.size(); ++i) {
    double gap = (centres_[i] - cluster_[i]) - (centres_[i - 1] + cluster_[i - 1]);
    if (!(gap > root_tolerance(i) + root_tolerance(i - 1)))
      throw Error(ErrorCode::Domain, "coefficient box too large: root clusters " + std::to_string(i - 1) +
                                         " and " + std::to_string(i) + " may overlap");
  }
}

double LocalModel::root_tolerance(std::size_t i) const { return 1e-7 * (1.0 + std::fabs(centres_[i])); }

std::vector<double> LocalModel::factor(std::size_t i, std::span<const double> x) const {
  if (x.size() != dimension()) throw Error(ErrorCode::SizeMismatch, "coefficient vector has the wrong length");
  int w = word_[i];
  std::vector<double> c(static_cast<std::size_t>(w) + 1, 0.0);
  for (int l = 0; l + 2 <= w; ++l) c[l] = x[offsets_[i] + l];
  c[w] = 1.0;
  return c;
}

namespace {

void check_box(const LocalModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) throw Error(ErrorCode::SizeMismatch, "coefficient vector has the wrong length");
  for (double c : x)
    if (!(std::fabs(c) <= model.box_radius())) throw Error(ErrorCode::Domain, "coefficient vector outside the box");
}

// Sign of P just right (after) and just left (before) of point k.
int sign_after(const Divisor& d, std::size_t k) {
  int parity = 0;
  for (std::size_t j = k + 1; j < d.size(); ++j) parity ^= d[j].multiplicity & 1;
  return parity ? -1 : 1;
}

int sign_before(const Divisor& d, std::size_t k) {
  return (d[k].multiplicity & 1) ? -sign_after(d, k) : sign_after(d, k);
}

double max_tolerance(const LocalModel& model) {
  double t = 0.0;
  for (std::size_t i = 0; i < model.centres().size(); ++i) t = std::max(t, model.root_tolerance(i));
  return t;
}

}  // namespace

double evaluate(const LocalModel& model, double u, std::span<const double> x) {
  check_box(model, x);
  double p = 1.0;
  for (std::size_t i = 0; i < model.word().size(); ++i) p *= poly_eval(model.factor(i, x), u - model.centres()[i]);
  return p;
}

Polarity polarity(const Divisor& d, std::size_t k) {
  if (d[k].multiplicity % 2 == 0) return sign_after(d, k) > 0 ? Polarity::Minus : Polarity::Plus;
  return sign_before(d, k) > 0 ? Polarity::Plus : Polarity::Minus;
}

Divisor fiber_divisor(const LocalModel& model, std::span<const double> x) {
  check_box(model, x);
  Divisor d;
  for (std::size_t i = 0; i < model.word().size(); ++i) {
    for (const RealRoot& r : real_roots(model.factor(i, x), model.root_tolerance(i)))
      d.push_back({model.centres()[i] + r.value, r.multiplicity, Polarity::Plus});
  }
  std::sort(d.begin(), d.end(), [](const DivisorPoint& a, const DivisorPoint& b) { return a.u < b.u; });
  for (std::size_t k = 0; k < d.size(); ++k) d[k].polarity = polarity(d, k);
  return d;
}

namespace {

// Calls visit(interval, first_index, last_index) for every component.
template <class Visit>
void for_each_component(const Divisor& d, Visit visit) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double open = -inf;
  std::size_t first = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    int before = sign_before(d, k), after = sign_after(d, k);
    if (before > 0 && after > 0) {
      visit(Interval{d[k].u, d[k].u}, k, k);
    } else if (before > 0) {
      open = d[k].u;
      first = k;
    } else if (after > 0) {
      visit(Interval{open, d[k].u}, first, k);
    }
  }
}

}  // namespace

std::vector<Interval> components(const Divisor& d) {
  std::vector<Interval> out;
  for_each_component(d, [&](Interval iv, std::size_t, std::size_t) { out.push_back(iv); });
  return out;
}

std::vector<Interval> components(const LocalModel& model, std::span<const double> x) {
  return components(fiber_divisor(model, x));
}

ModelImage model_causality(const LocalModel& model, std::span<const double> x, double entry) {
  Divisor d = fiber_divisor(model, x);
  const double tol = max_tolerance(model);
  std::size_t k = d.size();
  for (std::size_t j = 0; j < d.size(); ++j)
    if (std::fabs(d[j].u - entry) <= tol && (k == d.size() || std::fabs(d[j].u - entry) < std::fabs(d[k].u - entry)))
      k = j;
  if (k == d.size()) throw Error(ErrorCode::NotInDomain, "point is not a root of the fiber");
  if (sign_before(d, k) > 0 && sign_after(d, k) > 0) return {true, d[k].u};
  if (d[k].polarity == Polarity::Minus)
    throw Error(ErrorCode::NotInDomain, "causality map is undefined at an exit point");
  return {false, d[k + 1].u};
}

int longest_chain(const Divisor& d) {
  int best = 0;
  for_each_component(d, [&](Interval, std::size_t first, std::size_t last) {
    best = std::max(best, static_cast<int>(last - first));
  });
  return best;
}

PlInterpolator::PlInterpolator(std::vector<double> from, std::vector<double> to)
    : from_(std::move(from)), to_(std::move(to)) {
  if (from_.size() != to_.size() || from_.empty())
    throw Error(ErrorCode::SizeMismatch, "interpolator needs two non-empty point lists of equal length");
  for (std::size_t i = 1; i < from_.size(); ++i)
    if (!(from_[i - 1] < from_[i]) || !(to_[i - 1] < to_[i]))
      throw Error(ErrorCode::Domain, "interpolator points must be strictly increasing");
}

double PlInterpolator::operator()(double u) const {
  if (u <= from_.front()) return to_.front() + (u - from_.front());
  if (u >= from_.back()) return to_.back() + (u - from_.back());
  std::size_t i = static_cast<std::size_t>(std::upper_bound(from_.begin(), from_.end(), u) - from_.begin()) - 1;
  return to_[i] + (u - from_[i]) * (to_[i + 1] - to_[i]) / (from_[i + 1] - from_[i]);
}

double separating_contraction(double t) { return t - t * std::exp(-1.0 / t); }

SeparatingCoordinates separating_coordinates(const LocalModel& model, std::span<const double> x_star,
                                             std::span<const double> ts) {
  check_box(model, x_star);
  SeparatingCoordinates out;
  for (double t : ts) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::Domain, "arc parameter must lie in (0, 1]");
    SeparatedFiber fiber{t, {}, {}};
    for (double c : x_star) fiber.x.push_back(t * c);
    double param = t;
    for (const Interval& iv : components(model, fiber.x)) {
      SeparatedComponent sc{iv, param, {}};
      for (double c : x_star) sc.x_tilde.push_back(param * c);
      fiber.components.push_back(std::move(sc));
      param = separating_contraction(param);
    }
    out.fibers.push_back(std::move(fiber));
  }
  return out;
}

}  // namespace tlab
