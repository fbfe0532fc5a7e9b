#pragma once

#include "celliptic/grid.hpp"
#include "celliptic/measures.hpp"
#include "celliptic/multi_index.hpp"
#include "celliptic/operator.hpp"

#include <Eigen/Dense>

#include <vector>

namespace celliptic {

/// Number of lattice points next to each boundary face whose value of
/// fd_derivative(u, alpha) involves a one-sided stencil.
int fd_halfwidth(const MultiIndex &alpha);

/// Second-order finite-difference approximation of d^alpha u on the whole
/// lattice, one axis at a time: the centered stencil of half-width
/// ceil(a / 2) for axis order a, and a one-sided window of a + 2 points where
/// that does not fit.
GridFunction fd_derivative(const GridFunction &u, const MultiIndex &alpha);

/// A u by centered differences on the interior lattice (u shrunk by
/// ceil(k/2) points per side). Throws NumericalError if some axis has fewer
/// than k + 2 cells.
GridFunction apply_operator_fd(const Operator &op, const GridFunction &u);

/// Measure with density apply_operator_fd(op, u).
DiscreteMeasure variation_measure(const Operator &op, const GridFunction &u);

/// The k-th derivative tensor of u (components row-major in (i1..ik), then
/// the V component), on the interior lattice.
GridFunction fd_gradient_tensor(const GridFunction &u, int order);

struct ProfileLevel {
  int j = 0;
  double radius = 0.0;
  Eigen::VectorXd mean;          ///< <u> over 2^{-j} B
  double osc = 0.0;              ///< mean of |u - mean| over 2^{-j} B
  Eigen::VectorXd annulus_mean;  ///< same over 2^{-j} (B minus closure of B/4)
  double annulus_osc = 0.0;
  PotentialValue potential;      ///< I_k(|A u| restricted to 2^{-j} B)(x0)
  double ball_variation = 0.0;   ///< |A u|(2^{-j} B)
  double annulus_variation = 0.0;
};

struct OscillationProfile {
  Eigen::VectorXd center;
  double radius = 0.0;
  int k = 0;
  std::vector<ProfileLevel> levels;
};

/// Largest j with 2^{-j} r >= 8 h.
int max_profile_level(double r, double h);

/// Levels j = 0..j_max around x0. `variation` must be the variation measure of
/// u; `k` is the operator order. Throws InvariantError if B(x0, r) leaves the
/// grid box or j_max breaks the 8-cell floor.
OscillationProfile dyadic_profile(const GridFunction &u, const DiscreteMeasure &variation, int k,
                                  const Eigen::VectorXd &x0, double r, int j_max);
OscillationProfile dyadic_profile(const GridFunction &u, const Operator &op,
                                  const Eigen::VectorXd &x0, double r, int j_max);

struct TelescopingCheck {
  bool holds = true;
  double worst = 0.0;  ///< max over l < j of |mean_j - mean_l| / (2^n sum_{i=l..j} osc_i)
};

/// |mean_j - mean_l| <= 2^n sum_{i=l..j} osc_i (1 + rel_slack) for all l < j.
TelescopingCheck check_telescoping(const OscillationProfile &p, double rel_slack = 1e-6);

/// sum_j osc_j / (osc_0 + potential_0).
double oscillation_sum_ratio(const OscillationProfile &p);

/// max_j annulus_osc_j / (2^{-j} annulus_osc_0 + sum_{m<=j} 2^{m-j} (2^{-m} r)^{k-n}
/// |A u|(2^{-m} annulus)), the annulus estimate with the projection error
/// replaced by its Poincare bound.
double annulus_oscillation_ratio(const OscillationProfile &p, int n);

} // namespace celliptic
