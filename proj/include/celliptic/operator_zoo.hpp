#pragma once

#include "celliptic/operator.hpp"

#include <string>
#include <vector>

namespace celliptic::zoo {

// Codomain conventions (Euclidean norm in these coordinates):
//  gradient                      V = R,   W = R^n
//  symmetric_gradient            V = R^n, W = (e_11..e_nn, sqrt2 e_ij for i<j)
//  tracefree_symmetric_gradient  same as symmetric_gradient, trace removed on the diagonal
//  derivative(k) / hessian       V = R,   W = R^{n^k}, full tensor d_{i1}..d_{ik} u,
//                                row-major in (i1, ..., ik)
//  laplacian_scalar              V = W = R
//  cauchy_riemann (n = 2)        V = W = R^2, (d1 u1 - d2 u2, d2 u1 + d1 u2)

Operator gradient(int n);
Operator symmetric_gradient(int n);
Operator tracefree_symmetric_gradient(int n);
Operator derivative(int n, int k);
Operator hessian(int n);
Operator laplacian_scalar(int n);
Operator cauchy_riemann(int n);

/// Look up by name; `k` is only used by "derivative".
Operator by_name(const std::string &name, int n, int k = 3);

std::vector<std::string> names();

} // namespace celliptic::zoo
