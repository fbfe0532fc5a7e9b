#include "celliptic/fine_properties.hpp"

#include "celliptic/error.hpp"
#include "celliptic/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace celliptic {

using Eigen::VectorXd;
using Index = Eigen::Index;

std::string to_string(Prediction p) {
  switch (p) {
  case Prediction::lebesgue:
    return "lebesgue";
  case Prediction::sigma_candidate:
    return "sigma_candidate";
  case Prediction::undetermined:
    break;
  }
  return "undetermined";
}

double log_slope(const std::vector<double> &h, const std::vector<double> &values) {
  if (h.size() != values.size() || h.size() < 2)
    throw InvariantError("slope fit needs at least two matching samples");
  const double count = static_cast<double>(h.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += -std::log(h[i]);
    my += values[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = -std::log(h[i]) - mx;
    sxy += dx * (values[i] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

Prediction classify_trend(const std::vector<double> &slopes, int rungs, double epsilon) {
  if (rungs < 3 || slopes.empty())
    return Prediction::undetermined;
  for (double s : slopes)
    if (!std::isfinite(s))
      return Prediction::undetermined;
  const double smallest = *std::min_element(slopes.begin(), slopes.end());
  if (smallest <= epsilon)
    return Prediction::lebesgue;
  return Prediction::sigma_candidate;
}

void require_nested_ladder(const std::vector<GridFunction> &ladder) {
  if (ladder.empty())
    throw InvariantError("resolution ladder is empty");
  const GridFunction &base = ladder.front();
  const VectorXd lo = base.lo(), hi = base.hi();
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    const GridFunction &g = ladder[i];
    const double expected = ladder[i - 1].h() / 2.0;
    if (g.n() != base.n() || g.dim() != base.dim())
      throw InvariantError("ladder rungs disagree in dimension");
    if (std::abs(g.h() - expected) > 1e-9 * expected)
      throw InvariantError("ladder rungs must halve the spacing");
    if ((g.lo() - lo).cwiseAbs().maxCoeff() > 1e-9 * base.h() ||
        (g.hi() - hi).cwiseAbs().maxCoeff() > 1e-9 * base.h())
      throw InvariantError("ladder rungs must sample the same box");
  }
}

std::vector<double> maximal_radii(double r, double h) {
  std::vector<double> radii;
  for (int j = 0;; ++j) {
    const double rho = r * std::pow(2.0, -0.25 * j);
    if (rho < 4.0 * h)
      break;
    radii.push_back(rho);
  }
  if (radii.empty())
    radii.push_back(r);
  return radii;
}

std::vector<PointVerdict> lebesgue_scan(const Operator &op, const std::vector<GridFunction> &ladder,
                                        const std::vector<VectorXd> &points,
                                        const ScanOptions &options) {
  op.require_valid();
  require_nested_ladder(ladder);
  const double r = options.r;
  if (!(r > 0.0))
    throw InvariantError("scan radius must be positive");

  std::vector<double> radii = options.radii;
  if (radii.empty()) {
    int j_max = options.j_max;
    const int deepest = max_profile_level(r, ladder.front().h());
    if (j_max < 0)
      j_max = deepest;
    if (j_max < 0 || j_max > deepest)
      throw InvariantError("potential radii violate the 8-cell floor on the coarsest rung");
    radii = dyadic_radii(r, j_max + 1);
  }
  for (double rho : radii)
    if (!(rho > 0.0) || rho > r)
      throw InvariantError("potential radii must lie in (0, r]");

  for (const auto &x0 : points)
    for (const auto &g : ladder)
      if (!g.contains_region(Region::ball(x0, r)))
        throw InvariantError("query ball leaves the grid box");

  std::vector<DiscreteMeasure> variations;
  std::vector<double> hs;
  for (const auto &g : ladder) {
    variations.push_back(variation_measure(op, g));
    hs.push_back(g.h());
  }
  const GridFunction &finest = ladder.back();
  const DiscreteMeasure &fine_var = variations.back();
  const int fine_levels = max_profile_level(r, finest.h());
  const double k = static_cast<double>(op.k());

  std::vector<PointVerdict> out(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    PointVerdict v;
    v.x0 = points[p];
    v.radii = radii;
    v.potentials.assign(radii.size(), std::vector<double>(ladder.size(), 0.0));
    bool infinite = false;
    for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
      for (std::size_t i = 0; i < radii.size(); ++i) {
        const PotentialValue pv =
            riesz_potential(restrict(variations[rung], Region::ball(v.x0, radii[i])), k, v.x0);
        infinite = infinite || pv.infinite;
        v.potentials[i][rung] = pv.value;
      }
      v.maximal_by_rung.push_back(
          fractional_maximal(variations[rung], op.k(), v.x0, maximal_radii(r, hs[rung])));
    }
    v.maximal_value = v.maximal_by_rung.back();
    if (ladder.size() >= 2 && !infinite) {
      for (const auto &row : v.potentials)
        v.slopes.push_back(log_slope(hs, row));
      v.potential_trend = *std::min_element(v.slopes.begin(), v.slopes.end());
    } else {
      v.potential_trend = infinite ? std::numeric_limits<double>::infinity() : 0.0;
    }
    v.predicted = infinite ? Prediction::undetermined
                           : classify_trend(v.slopes, static_cast<int>(ladder.size()),
                                            options.slope_epsilon);

    if (fine_levels >= 1) {
      v.profile = dyadic_profile(finest, fine_var, op.k(), v.x0, r, fine_levels);
      const auto &L = v.profile.levels;
      v.osc_last = L.back().osc;
      v.mean_step_first = (L[1].mean - L[0].mean).norm();
      v.mean_step_last = (L.back().mean - L[L.size() - 2].mean).norm();
      v.means_cauchy = v.mean_step_last < options.cauchy_tol && v.mean_step_last <= v.mean_step_first;
      v.osc_vanishing = v.osc_last < options.osc_tol || v.osc_last <= 0.25 * L.front().osc;
    }
    v.consistent = v.predicted != Prediction::lebesgue || v.means_cauchy;
    out[p] = std::move(v);
  });
  return out;
}

VectorXd interpolate(const GridFunction &u, const VectorXd &x) {
  const int n = u.n();
  if (x.size() != n)
    throw InvariantError("point has the wrong dimension");
  std::vector<Index> base(n);
  std::vector<double> frac(n);
  for (int i = 0; i < n; ++i) {
    const double s = (x(i) - u.lo()(i)) / u.h();
    const double top = static_cast<double>(u.shape()[i] - 1);
    if (s < -1e-9 || s > top + 1e-9)
      throw InvariantError("interpolation point outside the grid box");
    const double c = std::clamp(s, 0.0, top);
    Index b = static_cast<Index>(std::floor(c));
    if (b >= u.shape()[i] - 1)
      b = std::max<Index>(u.shape()[i] - 2, 0);
    base[i] = b;
    frac[i] = u.shape()[i] == 1 ? 0.0 : c - static_cast<double>(b);
  }
  VectorXd value = VectorXd::Zero(u.dim());
  std::vector<Index> idx(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const bool up = (corner >> i) & 1;
      w *= up ? frac[i] : 1.0 - frac[i];
      idx[i] = base[i] + (up && u.shape()[i] > 1 ? 1 : 0);
    }
    if (w != 0.0)
      value += w * u.value(u.linear_index(idx));
  }
  return value;
}

std::vector<std::pair<VectorXd, VectorXd>> radial_pairs(const VectorXd &x, double r) {
  const int n = static_cast<int>(x.size());
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
  int total = 1;
  for (int i = 0; i < n; ++i)
    total *= 3;
  for (double t : {r / 4, r / 8, r / 16}) {
    for (int code = 0; code < total; ++code) {
      VectorXd d(n);
      int rest = code;
      for (int i = 0; i < n; ++i) {
        d(i) = static_cast<double>(rest % 3) - 1.0;
        rest /= 3;
      }
      if (d.isZero())
        continue;
      pairs.emplace_back(x, x + t * d);
    }
  }
  return pairs;
}

namespace {

ContinuityReport continuity_terms(const Operator &op, const GridFunction &u, int order,
                                  const std::vector<std::pair<VectorXd, VectorXd>> &pairs,
                                  double r) {
  if (!(r > 0.0))
    throw InvariantError("continuity radius must be positive");
  const GridFunction f = fd_gradient_tensor(u, order);
  const DiscreteMeasure var = variation_measure(op, u);
  const GridFunction &density = *var.density();
  ContinuityReport report;
  report.derivative_order = order;
  report.r = r;
  report.pairs.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto &[x, y] = pairs[i];
    PairTerms t;
    t.x = x;
    t.y = y;
    t.distance = (x - y).norm();
    if (!(t.distance < 0.5 * r))
      throw InvariantError("pair points must satisfy |x - y| < r/2");
    const Region ball = Region::ball(x, r);
    if (!f.contains_region(ball) || !density.contains_region(ball))
      throw InvariantError("ball B(x, r) leaves the valid grid");
    t.lhs = (interpolate(f, x) - interpolate(f, y)).norm();
    const DiscreteMeasure local = restrict(var, ball);
    double mass = local.total_variation();
    const auto idx = density.nearest(x);
    bool on_lattice = true;
    for (int a = 0; a < density.n(); ++a)
      on_lattice = on_lattice && idx[a] >= 0 && idx[a] < density.shape()[a];
    if (on_lattice) {
      const Index own = density.linear_index(idx);
      if (ball.contains(density.point(own)))
        mass -= var.cell_mass()(own);
    }
    t.variation_term = std::max(mass, 0.0);
    t.oscillation_term = t.distance / r * region_average(f, ball).oscillation;
    const double rhs = t.variation_term + t.oscillation_term;
    t.ratio = rhs > 0.0 ? t.lhs / rhs : (t.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.pairs[i] = std::move(t);
  });
  for (const auto &t : report.pairs)
    report.suite_constant = std::max(report.suite_constant, t.ratio);
  return report;
}

} // namespace

ContinuityReport continuity_check_k_eq_n(const Operator &op, const GridFunction &u,
                                         const std::vector<std::pair<VectorXd, VectorXd>> &pairs,
                                         double r) {
  op.require_valid();
  if (op.k() != op.n())
    throw InvariantError("continuity check needs k = n");
  return continuity_terms(op, u, 0, pairs, r);
}

ContinuityReport gradient_continuity_check_k_gt_n(
    const Operator &op, const GridFunction &u,
    const std::vector<std::pair<VectorXd, VectorXd>> &pairs, double r) {
  op.require_valid();
  if (op.k() <= op.n())
    throw InvariantError("gradient continuity check needs k > n");
  return continuity_terms(op, u, op.k() - op.n(), pairs, r);
}

LinftyReport linfty_bound_check(const Operator &op, const GridFunction &u, const Region &ball) {
  op.require_valid();
  if (op.k() < op.n())
    throw InvariantError("L-infinity bound needs k >= n");
  ball.require_valid();
  const GridFunction f = fd_gradient_tensor(u, op.k() - op.n());
  if (!f.contains_region(ball))
    throw InvariantError("ball leaves the valid grid");
  LinftyReport out;
  const CellWeights cells = clipped_cells(f, ball);
  double weight = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < cells.index.size(); ++i) {
    const double norm = f.value(cells.index[i]).norm();
    sum += cells.fraction[i] * norm;
    weight += cells.fraction[i];
    if (ball.contains(f.point(cells.index[i])))
      out.lhs = std::max(out.lhs, norm);
  }
  if (!(weight > 0.0))
    throw NumericalError("ball contains no grid cells");
  out.mean_term = sum / weight;
  out.variation = restrict(variation_measure(op, u), ball).total_variation();
  const double rhs = out.mean_term + out.variation;
  out.ratio = rhs > 0.0 ? out.lhs / rhs : 0.0;
  return out;
}

} // namespace celliptic
