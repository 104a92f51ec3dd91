#include "pebounds/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pebounds/error.hpp"

namespace pebounds {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kExclusion = 1e-6;  // relative to the search width
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

ConstraintSet barankin_set(const DiscreteModel& model, const std::vector<double>& points,
                           double theta) {
  ConstraintSet set;
  set.kind = ConstraintKind::barankin;
  set.anchor = theta;
  for (double tk : points) {
    set.constraints.push_back(
        {model.probabilities(tk), tk - theta, "barankin@" + std::to_string(tk)});
  }
  return set;
}

void require_search(const DiscreteModel& model, Interval search) {
  const Interval d = model.domain();
  if (!(search.hi > search.lo)) throw InvalidArgument("search interval must satisfy lo < hi");
  if (!d.contains(search.lo) || !d.contains(search.hi)) {
    throw InvalidArgument("search interval must lie inside the model domain");
  }
}

// Pieces of `search` at distance >= margin from theta.
std::vector<Interval> excluded_segments(Interval search, double theta, double margin) {
  std::vector<Interval> out;
  const Interval below{search.lo, std::min(search.hi, theta - margin)};
  const Interval above{std::max(search.lo, theta + margin), search.hi};
  if (below.hi > below.lo) out.push_back(below);
  if (above.hi > above.lo) out.push_back(above);
  return out;
}

struct Argmax {
  double x = 0.0;
  double value = kNegInf;
};

template <class F>
Argmax golden_maximize(F&& f, double a, double b, double xtol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > xtol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Argmax{c, fc} : Argmax{d, fd};
}

// Coarse scan of `points` evenly spaced nodes on each segment, then golden
// refinement inside the bracket around the best node.
template <class F>
Argmax scan_and_refine(F&& f, const std::vector<Interval>& segments, int points, double xtol) {
  Argmax best;
  Interval bracket{};
  for (const Interval& seg : segments) {
    const double h = seg.width() / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double x = i == points - 1 ? seg.hi : seg.lo + i * h;
      const double v = f(x);
      if (v > best.value) {
        best = {x, v};
        bracket = {std::max(seg.lo, x - h), std::min(seg.hi, x + h)};
      }
    }
  }
  if (best.value == kNegInf) return best;
  const Argmax refined = golden_maximize(f, bracket.lo, bracket.hi, xtol);
  return refined.value > best.value ? refined : best;
}

}  // namespace

TestPointGrid::TestPointGrid(std::vector<double> points, bool includes_truth)
    : points_(std::move(points)), includes_truth_(includes_truth) {
  if (points_.empty()) throw InvalidArgument("test point grid must be nonempty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw InvalidArgument("test points must be finite");
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw InvalidArgument("test points must be strictly increasing");
    }
  }
}

TestPointGrid TestPointGrid::equispaced(double anchor, double spacing, int n) {
  if (n < 1) throw InvalidArgument("equispaced grid needs n >= 1");
  if (n > 1 && !(spacing > 0.0)) throw InvalidArgument("grid spacing must be positive");
  std::vector<double> points(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) points[k] = anchor + k * spacing;
  return TestPointGrid(std::move(points), true);
}

ConstraintSet barankin_constraints(const DiscreteModel& model, const TestPointGrid& grid,
                                   double theta) {
  return barankin_set(model, grid.points(), theta);
}

ConstraintSet ecrb_constraints(const DiscreteModel& model, const TestPointGrid& grid) {
  return ecrb_constraints(model, grid, grid.points().front());
}

ConstraintSet ecrb_constraints(const DiscreteModel& model, const TestPointGrid& grid,
                               double anchor) {
  ConstraintSet set;
  set.kind = ConstraintKind::ecrb;
  set.anchor = anchor;
  for (double tk : grid.points()) {
    set.constraints.push_back({model.derivatives(tk), 1.0, "ecrb@" + std::to_string(tk)});
  }
  return set;
}

ConstraintSet crb_constraint(const DiscreteModel& model, double theta) {
  ConstraintSet set;
  set.kind = ConstraintKind::crb;
  set.anchor = theta;
  set.constraints.push_back({model.derivatives(theta), 1.0, "crb"});
  return set;
}

std::optional<double> two_point_bound(const DiscreteModel& model, double theta,
                                      double theta_prime, const Tolerances& tol) {
  const std::vector<double> p = model.probabilities(theta);
  const std::vector<double> q = model.probabilities(theta_prime);
  double mass_p = 0.0;
  double mass_q = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] > tol.support) {
      mass_p += p[x];
      mass_q += q[x];
    }
  }
  if (mass_p == 0.0) throw NumericalError("degenerate model: empty support");
  const double kappa = mass_q / mass_p;
  double denom = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] > tol.support) {
      const double dev = q[x] - kappa * p[x];
      denom += dev * dev / p[x];
    }
  }
  if (!(denom > 0.0)) return std::nullopt;
  const double delta = theta_prime - theta;
  return delta * delta / denom;
}

HcrResult hcr_bound(const DiscreteModel& model, double theta, Interval search,
                    const Tolerances& tol) {
  require_search(model, search);
  const auto segments = excluded_segments(search, theta, kExclusion * search.width());
  auto objective = [&](double tp) {
    const auto v = two_point_bound(model, theta, tp, tol);
    return v ? *v : kNegInf;
  };
  const Argmax best = scan_and_refine(objective, segments, 64, 1e-10);
  if (best.value == kNegInf) {
    throw NumericalError("hcr_bound: every scanned test point gives a divergent bound");
  }
  HcrResult out{best.value, best.x};
  const BoundResult crb = evaluate_constraints(model, crb_constraint(model, theta), theta, tol);
  if (crb.is_finite() && *crb.value > out.value) out = {*crb.value, theta};
  return out;
}

SweepResult barankin_sweep(const DiscreteModel& model, double theta, int n, SweepStrategy strategy,
                           const SweepOptions& options) {
  if (n < 2) throw InvalidArgument("barankin_sweep needs n >= 2");
  if (options.grid_points < 2 || options.refine_scan < 2) {
    throw InvalidArgument("barankin_sweep: scans need at least two points");
  }
  require_search(model, options.search);
  const double margin = kExclusion * options.search.width();

  std::vector<double> candidates;
  const double h = options.search.width() / (options.grid_points - 1);
  for (int i = 0; i < options.grid_points; ++i) {
    const double x = i == options.grid_points - 1 ? options.search.hi : options.search.lo + i * h;
    if (std::abs(x - theta) >= margin) candidates.push_back(x);
  }
  const std::size_t free = static_cast<std::size_t>(n - 1);

  SweepResult result;
  // Returns the bound, or -inf for skipped placements (counted).
  auto evaluate = [&](const std::vector<double>& placement) {
    ++result.evaluated;
    const BoundResult r = evaluate_constraints(model, barankin_set(model, placement, theta), theta,
                                               options.tol);
    if (!r.is_finite()) {
      ++result.divergent;
      return kNegInf;
    }
    if (r.rank < n) {
      ++result.ill_conditioned;
      return kNegInf;
    }
    return *r.value;
  };

  double best = kNegInf;
  std::vector<double> best_placement;
  if (candidates.size() >= free) {
    // Lexicographic enumeration of index combinations; strict improvement
    // keeps the first (smallest) placement on ties.
    std::vector<std::size_t> idx(free);
    for (std::size_t i = 0; i < free; ++i) idx[i] = i;
    std::vector<double> placement(free + 1);
    placement[0] = theta;
    while (true) {
      for (std::size_t i = 0; i < free; ++i) placement[i + 1] = candidates[idx[i]];
      const double v = evaluate(placement);
      if (v > best) {
        best = v;
        best_placement = placement;
      }
      std::size_t i = free;
      while (i > 0 && idx[i - 1] == candidates.size() - free + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < free; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  if (strategy == SweepStrategy::coordinate_refine && best > kNegInf) {
    const auto segments = excluded_segments(options.search, theta, margin);
    for (int pass = 0; pass < options.refine_passes; ++pass) {
      const double before = best;
      for (std::size_t j = 1; j <= free; ++j) {
        std::vector<double> trial = best_placement;
        auto along = [&](double t) {
          trial[j] = t;
          return evaluate(trial);
        };
        const Argmax found = scan_and_refine(along, segments, options.refine_scan, 1e-10);
        if (found.value > best) {
          best = found.value;
          best_placement[j] = found.x;
        }
      }
      if (!(best > before * (1.0 + 1e-15))) break;
    }
    std::sort(best_placement.begin() + 1, best_placement.end());
  }

  if (best > kNegInf) {
    result.value = best;
    result.placement = std::move(best_placement);
  }
  return result;
}

double min_grid_spacing(double a, double b, int outcomes) {
  if (!(b > a)) throw InvalidArgument("min_grid_spacing needs b > a");
  if (outcomes < 2) throw InvalidArgument("min_grid_spacing needs D >= 2");
  return (b - a) / (outcomes - 1);
}

double min_grid_spacing_iid(double a, double b, int m) {
  if (!(b > a)) throw InvalidArgument("min_grid_spacing_iid needs b > a");
  if (m < 1) throw InvalidArgument("min_grid_spacing_iid needs m >= 1");
  return (b - a) / m;
}

}  // namespace pebounds
