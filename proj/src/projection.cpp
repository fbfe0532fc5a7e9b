#include "celliptic/projection.hpp"

#include "celliptic/error.hpp"
#include "celliptic/grid_calculus.hpp"
#include "celliptic/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace celliptic {

using Index = Eigen::Index;

Polynomial project_l2(const Quadrature &quad, const Eigen::MatrixXd &samples,
                      const NullspaceBasis &basis, const Region &region) {
  region.require_valid();
  if (basis.basis.empty())
    throw InvariantError("projection needs a nonempty basis");
  const Polynomial &first = basis.basis.front();
  if (samples.rows() != quad.size() || samples.cols() != first.dim())
    throw InvariantError("samples must have one row per node and one column per component");
  const int count = basis.dim();
  std::vector<Polynomial> pulled;
  std::vector<Eigen::MatrixXd> values;
  for (const auto &e : basis.basis) {
    pulled.push_back(e.compose_affine(region.center, region.radius));
    values.push_back(pulled.back().evaluate(quad.nodes));
  }
  Eigen::MatrixXd gram(count, count);
  Eigen::VectorXd rhs(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::MatrixXd weighted = quad.weights.asDiagonal() * values[i];
    rhs(i) = (weighted.array() * samples.array()).sum();
    for (int j = 0; j <= i; ++j)
      gram(i, j) = gram(j, i) = (weighted.array() * values[j].array()).sum();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff()))
    throw NumericalError("Gram matrix numerically singular on the region");
  const Eigen::VectorXd a =
      eig.eigenvectors() * ((eig.eigenvectors().transpose() * rhs).array() / ev.array()).matrix();
  Polynomial out = 0.0 * pulled.front();
  for (int i = 0; i < count; ++i)
    out += a(i) * pulled[i];
  return out;
}

Polynomial project_l2(const std::function<Eigen::VectorXd(const Eigen::VectorXd &)> &u,
                      const NullspaceBasis &basis, const Region &region, int degree) {
  region.require_valid();
  if (basis.basis.empty())
    throw InvariantError("projection needs a nonempty basis");
  const Quadrature quad = region_quadrature(region, degree);
  Eigen::MatrixXd samples(quad.size(), basis.basis.front().dim());
  parallel_for(static_cast<std::size_t>(quad.size()), [&](std::size_t i) {
    samples.row(static_cast<Index>(i)) = u(quad.nodes.col(static_cast<Index>(i))).transpose();
  });
  return project_l2(quad, samples, basis, region);
}

Polynomial project_l2(const Polynomial &u, const NullspaceBasis &basis, const Region &region) {
  if (basis.basis.empty())
    throw InvariantError("projection needs a nonempty basis");
  const Quadrature quad =
      region_quadrature(region, u.degree_bound() + basis.basis.front().degree_bound());
  return project_l2(quad, u.evaluate(quad.nodes), basis, region);
}

Polynomial averaged_taylor(const GridFunction &u, int m, const Region &ball) {
  ball.require_valid();
  if (ball.kind != Region::Kind::ball)
    throw InvariantError("averaged Taylor polynomials are taken over balls");
  if (m < 0)
    throw InvariantError("Taylor order must be nonnegative");
  if (!u.contains_region(ball))
    throw InvariantError("ball leaves the grid box");
  if (2.0 * ball.radius < 4.0 * u.h())
    throw NumericalError("ball spans fewer than 4 grid cells");
  const int n = u.n();
  const int dim = u.dim();
  const CellWeights cells = clipped_cells(u, ball);
  double total = 0.0;
  for (double f : cells.fraction)
    total += f;

  // moments[gamma] = average of (-y)^gamma * d^alpha u(y), per alpha.
  Polynomial out(n, dim, m);
  const auto &alphas = cached_monomials_up_to(n, m);
  for (const auto &alpha : alphas) {
    const GridFunction d = order(alpha) == 0 ? u : fd_derivative(u, alpha);
    const int a = order(alpha);
    const Index count = static_cast<Index>(count_monomials_up_to(n, a));
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(count, dim);
    for (std::size_t c = 0; c < cells.index.size(); ++c) {
      const Eigen::VectorXd y = u.point(cells.index[c]);
      const Eigen::VectorXd mono = monomial_values(-y, a);
      moments.noalias() += cells.fraction[c] * mono * d.value(cells.index[c]).transpose();
    }
    moments /= total;
    const double inv_fact = 1.0 / multi_factorial(alpha);
    for (Index g = 0; g < count; ++g) {
      const MultiIndex &gamma = alphas[static_cast<std::size_t>(g)];
      MultiIndex beta(n);
      double binom = 1.0;
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        beta[i] = alpha[i] - gamma[i];
        if (beta[i] < 0) {
          ok = false;
          break;
        }
        binom *= static_cast<double>(binomial(alpha[i], beta[i]));
      }
      if (!ok)
        continue;
      out.coeffs().row(static_cast<Index>(graded_lex_index(beta))) +=
          binom * inv_fact * moments.row(g);
    }
  }
  return out;
}

double mean_abs(const Quadrature &quad, const Eigen::MatrixXd &values) {
  return quad.weights.dot(values.rowwise().norm()) / quad.volume();
}

namespace {

int abs_degree(int n) { return n == 2 ? 256 : (n == 3 ? 64 : 24); }

double mean_abs_on(const Polynomial &q, const Region &region) {
  const Quadrature quad = region_quadrature(region, abs_degree(region.n()));
  return mean_abs(quad, q.evaluate(quad.nodes));
}

} // namespace

double sup_norm_on_ball(const Polynomial &q, const Region &ball) {
  ball.require_valid();
  const int n = ball.n();
  const int deg = std::max(q.degree_bound(), 1);
  const Quadrature inner = region_quadrature(ball, std::max(2 * deg + 8, 24));
  const Quadrature sphere = sphere_rule(n, std::max(4 * deg + 16, 32));
  Eigen::MatrixXd pts(n, inner.size() + sphere.size() + 1);
  pts.leftCols(inner.size()) = inner.nodes;
  pts.middleCols(inner.size(), sphere.size()) =
      (ball.radius * sphere.nodes).colwise() + ball.center;
  pts.rightCols(1) = ball.center;
  const Eigen::VectorXd vals = q.evaluate(pts).rowwise().norm();

  std::vector<Index> order(static_cast<std::size_t>(vals.size()));
  for (Index i = 0; i < vals.size(); ++i)
    order[static_cast<std::size_t>(i)] = i;
  const std::size_t seeds = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(seeds),
                    order.end(), [&](Index a, Index b) { return vals(a) > vals(b); });

  auto clamp = [&](Eigen::VectorXd x) {
    const Eigen::VectorXd d = x - ball.center;
    const double norm = d.norm();
    if (norm > ball.radius)
      x = ball.center + d * (ball.radius / norm);
    return x;
  };
  double best = vals.maxCoeff();
  for (std::size_t s = 0; s < seeds; ++s) {
    Eigen::VectorXd x = pts.col(order[s]);
    double fx = vals(order[s]);
    for (double step = ball.radius / 16.0; step > 1e-10 * ball.radius;) {
      bool moved = false;
      for (int i = 0; i < n && !moved; ++i) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd y = x;
          y(i) += sign * step;
          y = clamp(y);
          const double fy = q(y).norm();
          if (fy > fx) {
            x = y;
            fx = fy;
            moved = true;
            break;
          }
        }
      }
      if (!moved)
        step *= 0.5;
    }
    best = std::max(best, fx);
  }
  return best;
}

double inverse_estimate_ratio(const Polynomial &q, const Region &ball) {
  ball.require_valid();
  if (q.is_zero())
    throw InvariantError("inverse estimate of the zero polynomial");
  const double mean = mean_abs_on(q, ball);
  if (!(mean > 0.0))
    throw NumericalError("mean of |q| vanished numerically");
  return sup_norm_on_ball(q, ball) / mean;
}

double center_vanishing_ratio(const Polynomial &q, const Region &ball, double lambda) {
  ball.require_valid();
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw InvariantError("lambda must lie in (0, 1]");
  if (q.is_zero())
    throw InvariantError("center ratio of the zero polynomial");
  if (q(ball.center).norm() > 1e-12 * q.coefficient_norm())
    throw InvariantError("polynomial does not vanish at the center");
  const double outer = mean_abs_on(q, ball);
  if (lambda == 1.0)
    return 1.0;
  return mean_abs_on(q, ball.scaled(lambda)) / outer;
}

} // namespace celliptic
