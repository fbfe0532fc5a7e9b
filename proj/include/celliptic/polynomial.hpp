#pragma once

#include "celliptic/multi_index.hpp"

#include <Eigen/Dense>

#include <vector>

namespace celliptic {

/// A vector-valued polynomial in n variables of total degree <= degree_bound.
///
/// Coefficients are stored as a matrix with one row per monomial in graded-lex
/// order (see multi_index.hpp) and one column per codomain component.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(int n, int dim, int degree_bound);
  Polynomial(int n, int dim, int degree_bound, Eigen::MatrixXd coeffs);

  /// Constant polynomial with value c.
  static Polynomial constant(int n, const Eigen::VectorXd &c);

  /// The polynomial x -> e_component * x^alpha.
  static Polynomial monomial(int n, int dim, const MultiIndex &alpha,
                             int component, double coefficient = 1.0);

  int n() const { return n_; }
  int dim() const { return dim_; }
  int degree_bound() const { return degree_; }
  const Eigen::MatrixXd &coeffs() const { return coeffs_; }
  Eigen::MatrixXd &coeffs() { return coeffs_; }

  /// Coefficient row of x^alpha; zero vector if |alpha| > degree_bound.
  Eigen::VectorXd coefficient(const MultiIndex &alpha) const;

  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd> &x) const;

  /// Values at the columns of `points` (n x N), returned as N x dim.
  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::MatrixXd> &points) const;

  /// Partial derivative d^alpha, of degree bound max(degree_bound - |alpha|, 0).
  Polynomial derivative(const MultiIndex &alpha) const;

  /// x -> p((x - center) / scale).
  Polynomial compose_affine(const Eigen::VectorXd &center, double scale) const;

  /// Same polynomial with a larger (or equal) degree bound.
  Polynomial with_degree_bound(int degree) const;

  /// Highest total degree carrying a coefficient above tol * max|coeff|;
  /// -1 for the zero polynomial.
  int actual_degree(double tol = 1e-12) const;

  double coefficient_norm() const { return coeffs_.norm(); }
  double max_coefficient() const;
  bool is_zero(double tol = 0.0) const { return max_coefficient() <= tol; }

  Polynomial &operator+=(const Polynomial &other);
  Polynomial &operator-=(const Polynomial &other);
  Polynomial &operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }

private:
  int n_ = 0;
  int dim_ = 0;
  int degree_ = 0;
  Eigen::MatrixXd coeffs_;
};

/// Monomial values x^alpha for all alpha of degree <= d, in graded-lex order.
Eigen::VectorXd monomial_values(const Eigen::Ref<const Eigen::VectorXd> &x, int d);

} // namespace celliptic
