#pragma once

#include "celliptic/grid.hpp"
#include "celliptic/grid_calculus.hpp"
#include "celliptic/measures.hpp"
#include "celliptic/operator.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace celliptic {

enum class Prediction { lebesgue, sigma_candidate, undetermined };
std::string to_string(Prediction p);

/// Slope threshold separating a bounded potential trend from divergence.
inline constexpr double kSlopeEpsilon = 0.2;

struct ScanOptions {
  double r = 0.5;
  /// Potential radii r, r/2, ..., r/2^j_max; -1 picks the deepest level the
  /// coarsest rung allows (8-cell floor). Ignored when `radii` is set.
  int j_max = -1;
  std::vector<double> radii;
  double slope_epsilon = kSlopeEpsilon;
  /// Thresholds for the empirical flags on the finest rung.
  double cauchy_tol = 1e-2;
  double osc_tol = 1e-2;
};

struct PointVerdict {
  Eigen::VectorXd x0;
  Prediction predicted = Prediction::undetermined;
  bool means_cauchy = false;
  bool osc_vanishing = false;
  /// Smallest slope of I_k(|A u| restricted to B(x0, rho))(x0) against
  /// log(1/h) over the tested radii rho.
  double potential_trend = 0.0;
  std::vector<double> radii;
  std::vector<double> slopes;                   ///< per radius
  std::vector<std::vector<double>> potentials;  ///< [radius][rung]
  std::vector<double> maximal_by_rung;          ///< M_k(|A u|)(x0) per rung
  double maximal_value = 0.0;                   ///< finest rung
  double osc_last = 0.0;
  double mean_step_first = 0.0;
  double mean_step_last = 0.0;
  OscillationProfile profile;  ///< finest rung
  /// False when predicted = lebesgue but the means are not Cauchy.
  bool consistent = true;
};

/// Least-squares slope of values against log(1/h).
double log_slope(const std::vector<double> &h, const std::vector<double> &values);

/// Prediction from per-radius slopes over `rungs` ladder rungs.
Prediction classify_trend(const std::vector<double> &slopes, int rungs, double epsilon);

/// Throws InvariantError unless the ladder consists of samples of one box
/// with spacing halved at every rung (coarse to fine).
void require_nested_ladder(const std::vector<GridFunction> &ladder);

/// Radii r * 2^{-j/4} down to 4 h (the fractional maximal ladder).
std::vector<double> maximal_radii(double r, double h);

std::vector<PointVerdict> lebesgue_scan(const Operator &op, const std::vector<GridFunction> &ladder,
                                        const std::vector<Eigen::VectorXd> &points,
                                        const ScanOptions &options);

struct PairTerms {
  Eigen::VectorXd x, y;
  double distance = 0.0;
  double lhs = 0.0;             ///< |f(x) - f(y)|
  double variation_term = 0.0;  ///< |A u|(B(x, r) minus the cell of x)
  double oscillation_term = 0.0;  ///< |x - y| / r * mean_B |f - <f>_B|
  double ratio = 0.0;           ///< lhs / (variation_term + oscillation_term)
};

struct ContinuityReport {
  int derivative_order = 0;  ///< f = grad^{derivative_order} u
  double r = 0.0;
  std::vector<PairTerms> pairs;
  double suite_constant = 0.0;  ///< max ratio
};

/// Pairs (x, x + t d) for t in {r/4, r/8, r/16} and every lattice direction
/// d in {-1, 0, 1}^n minus 0.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> radial_pairs(const Eigen::VectorXd &x,
                                                                      double r);

/// Two-term continuity estimate for k = n with f = u. Values at x and y come
/// from multilinear interpolation of the samples.
ContinuityReport continuity_check_k_eq_n(
    const Operator &op, const GridFunction &u,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> &pairs, double r);

/// Same estimate for k > n with f = grad^{k-n} u by finite differences.
ContinuityReport gradient_continuity_check_k_gt_n(
    const Operator &op, const GridFunction &u,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> &pairs, double r);

struct LinftyReport {
  double lhs = 0.0;        ///< max over lattice points in B of |grad^{k-n} u|
  double mean_term = 0.0;  ///< mean over B of |grad^{k-n} u|
  double variation = 0.0;  ///< |A u|(B)
  double ratio = 0.0;      ///< lhs / (mean_term + variation)
};

LinftyReport linfty_bound_check(const Operator &op, const GridFunction &u, const Region &ball);

/// Multilinear interpolation of the samples at x; InvariantError outside the box.
Eigen::VectorXd interpolate(const GridFunction &u, const Eigen::VectorXd &x);

} // namespace celliptic
