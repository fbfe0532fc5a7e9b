#include "celliptic/quadrature.hpp"

#include "celliptic/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <utility>

namespace celliptic {

namespace {

// P_m(x) and P_m'(x) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

Rule1D gauss_legendre(int m) {
  if (m < 1)
    throw InvariantError("Gauss-Legendre needs at least one node");
  Rule1D rule{Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m)};
  if (m == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double dp = legendre(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1)
    rule.nodes[m / 2] = 0.0;
  return rule;
}

Rule1D gauss_gegenbauer(int m, double a) {
  if (m < 1 || a <= -0.5)
    throw InvariantError("Gauss-Gegenbauer needs m >= 1 and a > -1/2");
  if (a == 0.0)
    return gauss_legendre(m);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + 2.0 * a;
    const double b = std::sqrt(k * (k + 2.0 * a) / (s * s - 1.0));
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
  Rule1D rule{es.eigenvalues(), Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

Quadrature sphere_rule(int n, int degree) {
  if (n < 2)
    throw InvariantError("sphere rules need n >= 2");
  degree = std::max(degree, 0);
  if (n == 2) {
    const int m = degree + 1;
    Quadrature q{Eigen::MatrixXd(2, m), Eigen::VectorXd::Constant(m, 2.0 * std::numbers::pi / m)};
    for (int j = 0; j < m; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / m;
      q.nodes(0, j) = std::cos(theta);
      q.nodes(1, j) = std::sin(theta);
    }
    return q;
  }
  // S^{n-1}: x = (t, sqrt(1 - t^2) omega), dsigma = (1 - t^2)^{(n-3)/2} dt domega.
  const Rule1D polar = gauss_gegenbauer(degree / 2 + 1, 0.5 * (n - 3));
  const Quadrature inner = sphere_rule(n - 1, degree);
  const Eigen::Index count = polar.nodes.size() * inner.size();
  Quadrature q{Eigen::MatrixXd(n, count), Eigen::VectorXd(count)};
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < polar.nodes.size(); ++a) {
    const double t = polar.nodes[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (Eigen::Index b = 0; b < inner.size(); ++b, ++col) {
      q.nodes(0, col) = t;
      q.nodes.col(col).tail(n - 1) = s * inner.nodes.col(b);
      q.weights[col] = polar.weights[a] * inner.weights[b];
    }
  }
  return q;
}

Quadrature region_quadrature(const Region &region, int degree) {
  region.require_valid();
  const int n = region.n();
  degree = std::max(degree, 0);
  const Quadrature sphere = sphere_rule(n, degree);
  // Radial factor rho^{n-1} times a polynomial of degree <= degree.
  const Rule1D radial = gauss_legendre((degree + n) / 2 + 1);
  const double lo = region.inner_radius();
  const double hi = region.radius;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const Eigen::Index count = radial.nodes.size() * sphere.size();
  Quadrature q{Eigen::MatrixXd(n, count), Eigen::VectorXd(count)};
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < radial.nodes.size(); ++a) {
    const double rho = mid + half * radial.nodes[a];
    const double wr = half * radial.weights[a] * std::pow(rho, n - 1);
    for (Eigen::Index b = 0; b < sphere.size(); ++b, ++col) {
      q.nodes.col(col) = region.center + rho * sphere.nodes.col(b);
      q.weights[col] = wr * sphere.weights[b];
    }
  }
  return q;
}

double exact_monomial_integral(const Region &region, const MultiIndex &alpha) {
  region.require_valid();
  const int n = region.n();
  if (static_cast<int>(alpha.size()) != n)
    throw InvariantError("multi-index does not match the region dimension");
  double log_num = 0.0;
  double beta_sum = 0.0;
  for (int a : alpha) {
    if (a % 2 != 0)
      return 0.0;
    const double beta = 0.5 * (a + 1);
    log_num += std::lgamma(beta);
    beta_sum += beta;
  }
  const double sphere = 2.0 * std::exp(log_num - std::lgamma(beta_sum));
  const int p = order(alpha) + n;
  const double r = region.radius;
  const double inner = region.inner_radius();
  return sphere * (std::pow(r, p) - std::pow(inner, p)) / p;
}

} // namespace celliptic
