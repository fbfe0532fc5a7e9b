#pragma once

#include "celliptic/operator.hpp"
#include "celliptic/polynomial.hpp"

#include <Eigen/Dense>

#include <vector>

namespace celliptic {

/// Basis of K_d = { q in P_d(R^n; V) : A q = 0 }, orthonormal in L^2(B(0,1)).
struct NullspaceBasis {
  int degree = 0;                   ///< smallest d' with dim K_{d'} = dim K_d
  int degree_bound = 0;             ///< d
  std::vector<Polynomial> basis;
  std::vector<int> dims_by_degree;  ///< dim K_0, ..., dim K_d

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Singular values at or below this fraction of sigma_max count as zero.
inline constexpr double kKernelCutoff = 1e-10;

/// Matrix of q -> A q from coefficients of degree <= d V-valued polynomials
/// (column = monomial * dim_v + component) to coefficients of degree <= d - k
/// W-valued polynomials (row = monomial * dim_w + component).
Eigen::MatrixXd assemble_operator_matrix(const Operator &op, int d);

/// dim K_0, ..., dim K_d without building the basis.
std::vector<int> kernel_dims(const Operator &op, int d);

NullspaceBasis kernel_basis(const Operator &op, int d);

/// ceil(d_max / 2).
int stabilization_window(int d_max);

struct StabilizedNullspace {
  bool stabilized = false;
  NullspaceBasis basis;  ///< K_{d_max}; meaningful as N(A) only when stabilized
};

/// K_{d_max}, flagged stabilized when dim K_d is constant over the last
/// stabilization_window(d_max) degree steps.
StabilizedNullspace stabilized_nullspace(const Operator &op, int d_max);

/// Orthonormalise polynomials in L^2(B(0,1)); throws NumericalError when the
/// Gram matrix is numerically singular.
std::vector<Polynomial> orthonormalize_on_unit_ball(const std::vector<Polynomial> &polys);

} // namespace celliptic
