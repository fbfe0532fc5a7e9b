#include "celliptic/polynomial.hpp"

#include "celliptic/error.hpp"

#include <algorithm>
#include <cmath>

namespace celliptic {

Polynomial::Polynomial(int n, int dim, int degree_bound)
    : n_(n), dim_(dim), degree_(std::max(degree_bound, 0)),
      coeffs_(Eigen::MatrixXd::Zero(
          static_cast<Eigen::Index>(count_monomials_up_to(n, std::max(degree_bound, 0))),
          dim)) {}

Polynomial::Polynomial(int n, int dim, int degree_bound, Eigen::MatrixXd coeffs)
    : n_(n), dim_(dim), degree_(degree_bound), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != static_cast<Eigen::Index>(count_monomials_up_to(n, degree_bound)) ||
      coeffs_.cols() != dim)
    throw InvariantError("polynomial coefficient matrix has the wrong shape");
}

Polynomial Polynomial::constant(int n, const Eigen::VectorXd &c) {
  Polynomial p(n, static_cast<int>(c.size()), 0);
  p.coeffs_.row(0) = c.transpose();
  return p;
}

Polynomial Polynomial::monomial(int n, int dim, const MultiIndex &alpha, int component,
                                double coefficient) {
  Polynomial p(n, dim, order(alpha));
  p.coeffs_(static_cast<Eigen::Index>(graded_lex_index(alpha)), component) = coefficient;
  return p;
}

Eigen::VectorXd Polynomial::coefficient(const MultiIndex &alpha) const {
  if (order(alpha) > degree_)
    return Eigen::VectorXd::Zero(dim_);
  return coeffs_.row(static_cast<Eigen::Index>(graded_lex_index(alpha))).transpose();
}

Eigen::VectorXd monomial_values(const Eigen::Ref<const Eigen::VectorXd> &x, int d) {
  const int n = static_cast<int>(x.size());
  const auto &monos = cached_monomials_up_to(n, d);
  Eigen::MatrixXd powers(n, d + 1);
  for (int i = 0; i < n; ++i) {
    powers(i, 0) = 1.0;
    for (int p = 1; p <= d; ++p)
      powers(i, p) = powers(i, p - 1) * x[i];
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(monos.size()));
  for (std::size_t m = 0; m < monos.size(); ++m) {
    double v = 1.0;
    for (int i = 0; i < n; ++i)
      v *= powers(i, monos[m][i]);
    out[static_cast<Eigen::Index>(m)] = v;
  }
  return out;
}

Eigen::VectorXd Polynomial::operator()(const Eigen::Ref<const Eigen::VectorXd> &x) const {
  if (x.size() != n_)
    throw InvariantError("evaluation point has the wrong dimension");
  return coeffs_.transpose() * monomial_values(x, degree_);
}

Eigen::MatrixXd Polynomial::evaluate(const Eigen::Ref<const Eigen::MatrixXd> &points) const {
  if (points.rows() != n_)
    throw InvariantError("evaluation points have the wrong dimension");
  Eigen::MatrixXd basis(points.cols(), coeffs_.rows());
  for (Eigen::Index j = 0; j < points.cols(); ++j)
    basis.row(j) = monomial_values(points.col(j), degree_).transpose();
  return basis * coeffs_;
}

Polynomial Polynomial::derivative(const MultiIndex &alpha) const {
  const int out_degree = std::max(degree_ - order(alpha), 0);
  Polynomial out(n_, dim_, out_degree);
  if (order(alpha) > degree_)
    return out;
  const auto &monos = cached_monomials_up_to(n_, degree_);
  MultiIndex reduced(static_cast<std::size_t>(n_));
  for (std::size_t m = 0; m < monos.size(); ++m) {
    const double ff = falling_factorial(monos[m], alpha);
    if (ff == 0.0)
      continue;
    for (int i = 0; i < n_; ++i)
      reduced[i] = monos[m][i] - alpha[i];
    out.coeffs_.row(static_cast<Eigen::Index>(graded_lex_index(reduced))) +=
        ff * coeffs_.row(static_cast<Eigen::Index>(m));
  }
  return out;
}

Polynomial Polynomial::compose_affine(const Eigen::VectorXd &center, double scale) const {
  if (center.size() != n_)
    throw InvariantError("affine center has the wrong dimension");
  Polynomial out(n_, dim_, degree_);
  const auto &monos = cached_monomials_up_to(n_, degree_);
  MultiIndex beta(static_cast<std::size_t>(n_));
  for (std::size_t m = 0; m < monos.size(); ++m) {
    const auto row = coeffs_.row(static_cast<Eigen::Index>(m));
    if (row.isZero(0.0))
      continue;
    const MultiIndex &alpha = monos[m];
    const double inv_scale = std::pow(scale, -order(alpha));
    // Expand prod_i (x_i - c_i)^{alpha_i} over all beta <= alpha.
    std::fill(beta.begin(), beta.end(), 0);
    while (true) {
      double w = inv_scale;
      for (int i = 0; i < n_; ++i)
        w *= static_cast<double>(binomial(alpha[i], beta[i])) *
             std::pow(-center[i], alpha[i] - beta[i]);
      out.coeffs_.row(static_cast<Eigen::Index>(graded_lex_index(beta))) += w * row;
      int i = 0;
      while (i < n_ && beta[i] == alpha[i]) {
        beta[i] = 0;
        ++i;
      }
      if (i == n_)
        break;
      ++beta[i];
    }
  }
  return out;
}

Polynomial Polynomial::with_degree_bound(int degree) const {
  if (degree < degree_)
    throw InvariantError("cannot lower the degree bound of a polynomial");
  Polynomial out(n_, dim_, degree);
  out.coeffs_.topRows(coeffs_.rows()) = coeffs_;
  return out;
}

int Polynomial::actual_degree(double tol) const {
  const double cutoff = tol * max_coefficient();
  if (max_coefficient() == 0.0)
    return -1;
  for (int d = degree_; d >= 0; --d) {
    const auto lo = static_cast<Eigen::Index>(count_monomials_up_to(n_, d - 1));
    const auto hi = static_cast<Eigen::Index>(count_monomials_up_to(n_, d));
    if (coeffs_.middleRows(lo, hi - lo).cwiseAbs().maxCoeff() > cutoff)
      return d;
  }
  return -1;
}

double Polynomial::max_coefficient() const {
  return coeffs_.size() == 0 ? 0.0 : coeffs_.cwiseAbs().maxCoeff();
}

Polynomial &Polynomial::operator+=(const Polynomial &other) {
  if (other.n_ != n_ || other.dim_ != dim_)
    throw InvariantError("adding polynomials of different shapes");
  if (other.degree_ > degree_)
    *this = with_degree_bound(other.degree_);
  coeffs_.topRows(other.coeffs_.rows()) += other.coeffs_;
  return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &other) {
  Polynomial neg = other;
  neg *= -1.0;
  return *this += neg;
}

Polynomial &Polynomial::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

} // namespace celliptic
