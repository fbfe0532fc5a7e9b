#pragma once

#include "celliptic/grid.hpp"
#include "celliptic/nullspace.hpp"
#include "celliptic/polynomial.hpp"
#include "celliptic/quadrature.hpp"
#include "celliptic/region.hpp"

#include <Eigen/Dense>

#include <functional>

namespace celliptic {

/// L^2(region)-orthogonal projection onto span(basis). `samples` holds u at
/// the quadrature nodes (N x dim_v). The basis, orthonormal on B(0,1), is
/// pulled back to the region by x -> (x - center) / radius. Throws
/// NumericalError if the Gram matrix on the region is numerically singular.
Polynomial project_l2(const Quadrature &quad, const Eigen::MatrixXd &samples,
                      const NullspaceBasis &basis, const Region &region);

/// Same with u given as a function; the quadrature integrates polynomials of
/// degree `degree` exactly.
Polynomial project_l2(const std::function<Eigen::VectorXd(const Eigen::VectorXd &)> &u,
                      const NullspaceBasis &basis, const Region &region, int degree);

/// Same for a polynomial u, with an exact quadrature.
Polynomial project_l2(const Polynomial &u, const NullspaceBasis &basis, const Region &region);

/// Averaged Taylor polynomial of order m over a ball: the plain average over the
/// ball of the degree-m Taylor polynomials of u, with derivatives from
/// fd_derivative and cell-clipped averages. Throws NumericalError if the ball
/// spans fewer than 4 cells and InvariantError if it leaves the grid.
Polynomial averaged_taylor(const GridFunction &u, int m, const Region &ball);

/// Mean of |values| (Euclidean per node) under the quadrature.
double mean_abs(const Quadrature &quad, const Eigen::MatrixXd &values);

/// sup over the ball of |q|, from a dense sample refined by local search.
double sup_norm_on_ball(const Polynomial &q, const Region &ball);

/// ||q||_inf(B) / mean_B |q|. Throws InvariantError for q = 0.
double inverse_estimate_ratio(const Polynomial &q, const Region &ball);

/// mean over lambda B of |q| / mean over B of |q|, for q vanishing at the
/// center. Throws InvariantError if |q(x0)| > 1e-12 |coeffs| or lambda is not
/// in (0, 1].
double center_vanishing_ratio(const Polynomial &q, const Region &ball, double lambda);

} // namespace celliptic
