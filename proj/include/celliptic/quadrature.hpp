#pragma once

#include "celliptic/multi_index.hpp"
#include "celliptic/region.hpp"

#include <Eigen/Dense>

namespace celliptic {

/// Nodes (columns, n x N) with positive weights.
struct Quadrature {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
  double volume() const { return weights.sum(); }

  /// sum_i w_i f_i for values given per node.
  double integrate(const Eigen::Ref<const Eigen::VectorXd> &values) const {
    return weights.dot(values);
  }
};

struct Rule1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// m-point Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int m);

/// m-point Gauss rule on [-1, 1] for the weight (1 - t^2)^a, a > -1/2
/// (Golub-Welsch on the symmetric Jacobi recurrence).
Rule1D gauss_gegenbauer(int m, double a);

/// Rule on the unit sphere S^{n-1} exact for polynomials of degree <= degree.
Quadrature sphere_rule(int n, int degree);

/// Polar-coordinate product rule on a ball or annulus, exact for
/// polynomials of degree <= degree.
Quadrature region_quadrature(const Region &region, int degree);

/// Closed form of int_{region} (x - center)^alpha dx.
double exact_monomial_integral(const Region &region, const MultiIndex &alpha);

} // namespace celliptic
