#include "celliptic/grid_calculus.hpp"

#include "celliptic/error.hpp"

#include <cmath>
#include <map>

namespace celliptic {

using Index = Eigen::Index;

namespace {

Index axis_stride(const GridFunction &u, int axis) {
  Index stride = 1;
  for (int i = u.n() - 1; i > axis; --i)
    stride *= u.shape()[i];
  return stride;
}

// Weights w with sum_j w_j s_j^m / m! = [m == order] for m < offsets.size().
Eigen::VectorXd stencil_weights(const std::vector<int> &offsets, int order) {
  const Index m = static_cast<Index>(offsets.size());
  Eigen::MatrixXd V(m, m);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < m; ++c)
      V(r, c) = std::pow(static_cast<double>(offsets[c]), static_cast<double>(r)) / factorial(static_cast<int>(r));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(order) = 1.0;
  return V.fullPivLu().solve(rhs);
}

// d^order / dx_axis^order, second-order accurate: the centered stencil of
// half-width ceil(order / 2) where it fits, otherwise the window of order + 2
// consecutive points nearest to the boundary.
GridFunction axis_derivative(const GridFunction &u, int axis, int order) {
  const Index len = u.shape()[axis];
  if (len < order + 2)
    throw NumericalError("grid too small for finite differences");
  const Index stride = axis_stride(u, axis);
  const int half = (order + 1) / 2;
  const double scale = std::pow(u.h(), -order);

  std::vector<std::vector<int>> offsets(static_cast<std::size_t>(len));
  std::vector<Eigen::VectorXd> weights(static_cast<std::size_t>(len));
  std::vector<int> centered;
  for (int s = -half; s <= half; ++s)
    centered.push_back(s);
  const Eigen::VectorXd centered_w = stencil_weights(centered, order) * scale;
  for (Index i = 0; i < len; ++i) {
    auto &off = offsets[static_cast<std::size_t>(i)];
    if (i - half >= 0 && i + half < len) {
      off = centered;
      weights[static_cast<std::size_t>(i)] = centered_w;
      continue;
    }
    const Index first = i < half ? 0 : len - (order + 2);
    for (Index j = 0; j < order + 2; ++j)
      off.push_back(static_cast<int>(first + j - i));
    weights[static_cast<std::size_t>(i)] = stencil_weights(off, order) * scale;
  }

  GridFunction out(u.lo(), u.h(), u.shape(), u.dim());
  const Eigen::MatrixXd &v = u.values();
  Eigen::MatrixXd &w = out.values();
  for (Index l = 0; l < u.size(); ++l) {
    const auto i = static_cast<std::size_t>((l / stride) % len);
    const auto &off = offsets[i];
    const auto &wt = weights[i];
    auto col = w.col(l);
    col.setZero();
    for (std::size_t j = 0; j < off.size(); ++j)
      if (wt(static_cast<Index>(j)) != 0.0)
        col += wt(static_cast<Index>(j)) * v.col(l + off[j] * stride);
  }
  return out;
}

int operator_halfwidth(int k) { return (k + 1) / 2; }

void require_fd_size(const GridFunction &u, int k) {
  for (Index s : u.shape())
    if (s - 1 < k + 2)
      throw NumericalError("grid too small: need at least k + 2 cells per axis");
}

} // namespace

int fd_halfwidth(const MultiIndex &alpha) {
  int g = 0;
  for (int a : alpha)
    g = std::max(g, (a + 1) / 2);
  return g;
}

GridFunction fd_derivative(const GridFunction &u, const MultiIndex &alpha) {
  if (static_cast<int>(alpha.size()) != u.n())
    throw InvariantError("multi-index length must match the grid dimension");
  GridFunction cur = u;
  for (int axis = 0; axis < u.n(); ++axis) {
    const int a = alpha[axis];
    if (a < 0)
      throw InvariantError("multi-index entries must be nonnegative");
    if (a > 0)
      cur = axis_derivative(cur, axis, a);
  }
  return cur;
}

GridFunction apply_operator_fd(const Operator &op, const GridFunction &u) {
  op.require_valid();
  if (u.n() != op.n() || u.dim() != op.dim_v())
    throw InvariantError("grid function does not match the operator's domain");
  require_fd_size(u, op.k());
  const Index g = operator_halfwidth(op.k());
  GridFunction out;
  bool first = true;
  for (const auto &[alpha, A] : op.terms()) {
    const GridFunction d = fd_derivative(u, alpha).shrunk(g);
    if (first) {
      out = GridFunction(d.lo(), d.h(), d.shape(), op.dim_w());
      first = false;
    }
    out.values().noalias() += A * d.values();
  }
  return out;
}

DiscreteMeasure variation_measure(const Operator &op, const GridFunction &u) {
  auto density = std::make_shared<GridFunction>(apply_operator_fd(op, u));
  return DiscreteMeasure(u.n(), {}, std::move(density));
}

GridFunction fd_gradient_tensor(const GridFunction &u, int order) {
  if (order < 0)
    throw InvariantError("derivative order must be nonnegative");
  if (order == 0)
    return u;
  require_fd_size(u, order);
  const int n = u.n();
  const Index g = operator_halfwidth(order);
  Index count = 1;
  for (int i = 0; i < order; ++i)
    count *= n;
  std::map<MultiIndex, GridFunction> cache;
  GridFunction out;
  for (Index t = 0; t < count; ++t) {
    MultiIndex alpha(n, 0);
    Index rest = t;
    for (int i = 0; i < order; ++i) {
      ++alpha[rest % n];
      rest /= n;
    }
    auto it = cache.find(alpha);
    if (it == cache.end())
      it = cache.emplace(alpha, fd_derivative(u, alpha).shrunk(g)).first;
    const GridFunction &d = it->second;
    if (t == 0)
      out = GridFunction(d.lo(), d.h(), d.shape(), static_cast<int>(count) * u.dim());
    out.values().middleRows(t * u.dim(), u.dim()) = d.values();
  }
  return out;
}

int max_profile_level(double r, double h) {
  if (!(r >= 8.0 * h))
    return -1;
  return static_cast<int>(std::floor(std::log2(r / (8.0 * h)) + 1e-12));
}

OscillationProfile dyadic_profile(const GridFunction &u, const DiscreteMeasure &variation, int k,
                                  const Eigen::VectorXd &x0, double r, int j_max) {
  const Region ball = Region::ball(x0, r);
  ball.require_valid();
  if (!u.contains_region(ball))
    throw InvariantError("profile ball leaves the grid box");
  if (j_max < 0 || j_max > max_profile_level(r, u.h()))
    throw InvariantError("j_max violates the 8-cell floor");
  OscillationProfile p;
  p.center = x0;
  p.radius = r;
  p.k = k;
  for (int j = 0; j <= j_max; ++j) {
    ProfileLevel level;
    level.j = j;
    level.radius = std::ldexp(r, -j);
    const Region b = Region::ball(x0, level.radius);
    const Region a = Region::annulus(x0, level.radius, 0.25);
    const RegionAverage ball_avg = region_average(u, b);
    const RegionAverage ann_avg = region_average(u, a);
    level.mean = ball_avg.mean;
    level.osc = ball_avg.oscillation;
    level.annulus_mean = ann_avg.mean;
    level.annulus_osc = ann_avg.oscillation;
    const DiscreteMeasure local = restrict(variation, b);
    level.potential = riesz_potential(local, static_cast<double>(k), x0);
    level.ball_variation = local.total_variation();
    level.annulus_variation = restrict(variation, a).total_variation();
    p.levels.push_back(std::move(level));
  }
  return p;
}

OscillationProfile dyadic_profile(const GridFunction &u, const Operator &op,
                                  const Eigen::VectorXd &x0, double r, int j_max) {
  return dyadic_profile(u, variation_measure(op, u), op.k(), x0, r, j_max);
}

TelescopingCheck check_telescoping(const OscillationProfile &p, double rel_slack) {
  TelescopingCheck out;
  const int n = static_cast<int>(p.center.size());
  const double factor = std::ldexp(1.0, n);
  const auto &L = p.levels;
  for (std::size_t l = 0; l < L.size(); ++l) {
    double osc_sum = L[l].osc;
    for (std::size_t j = l + 1; j < L.size(); ++j) {
      osc_sum += L[j].osc;
      const double lhs = (L[j].mean - L[l].mean).norm();
      const double rhs = factor * osc_sum;
      if (lhs > rhs * (1.0 + rel_slack) + 1e-14)
        out.holds = false;
      if (rhs > 0.0)
        out.worst = std::max(out.worst, lhs / rhs);
    }
  }
  return out;
}

double oscillation_sum_ratio(const OscillationProfile &p) {
  if (p.levels.empty())
    throw InvariantError("empty oscillation profile");
  double sum = 0.0;
  for (const auto &l : p.levels)
    sum += l.osc;
  const double denom = p.levels[0].osc + p.levels[0].potential.value;
  if (denom == 0.0)
    return sum == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sum / denom;
}

double annulus_oscillation_ratio(const OscillationProfile &p, int n) {
  double worst = 0.0;
  for (std::size_t j = 0; j < p.levels.size(); ++j) {
    double rhs = std::ldexp(p.levels[0].annulus_osc, -static_cast<int>(j));
    for (std::size_t m = 0; m <= j; ++m)
      rhs += std::ldexp(1.0, static_cast<int>(m) - static_cast<int>(j)) *
             std::pow(p.levels[m].radius, p.k - n) * p.levels[m].annulus_variation;
    const double lhs = p.levels[j].annulus_osc;
    if (rhs > 0.0)
      worst = std::max(worst, lhs / rhs);
    else if (lhs > 0.0)
      return std::numeric_limits<double>::infinity();
  }
  return worst;
}

} // namespace celliptic
