#pragma once

#include "celliptic/operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace celliptic {

/// Smallest singular value of a dim_w x dim_v matrix viewed as a map on
/// C^dim_v; zero when dim_w < dim_v.
double smallest_singular_value(const Eigen::MatrixXcd &m);

/// min sigma_min(A[xi]) over a quasi-uniform sample of the real unit sphere,
/// refined grid_depth times around the running minimiser.
double real_ellipticity_margin(const Operator &op, int grid_depth);

enum class Verdict { c_elliptic_evidence, not_c_elliptic, inconclusive };

std::string to_string(Verdict v);

/// Complex direction xi (|xi| = 1) and unit v with |A[xi] v| = residual.
struct SymbolCertificate {
  Eigen::VectorXcd xi;
  Eigen::VectorXcd v;
  double residual = 0.0;
};

struct SymbolSearchResult {
  double minimum = 0.0;  ///< best sigma_min found on the complex unit sphere
  Eigen::VectorXcd xi;
  Eigen::VectorXcd v;
};

/// Multi-start derivative-free minimisation of sigma_min(A[a + ib]) over
/// |a|^2 + |b|^2 = 1. Start points come from a Halton sequence offset by seed.
SymbolSearchResult complex_symbol_search(const Operator &op, int restarts,
                                         std::uint64_t seed = 0);

struct EllipticityReport {
  double real_margin = 0.0;
  Verdict verdict = Verdict::inconclusive;
  /// Present whenever the symbol search found sigma_min below tol.
  std::optional<SymbolCertificate> certificate;
  std::vector<int> nullspace_dims;

  double symbol_minimum = 0.0;
  bool symbol_violation = false;
  bool nullspace_increasing = false;  ///< dim K_{d_max} > dim K_{d_max - 1}
  bool nullspace_stabilized = false;
  int stabilization_window = 0;
};

struct ClassifyOptions {
  int d_max = 8;
  int restarts = 32;
  double tol = 1e-8;
  int grid_depth = 8;
  std::uint64_t seed = 0;
};

EllipticityReport c_ellipticity_classify(const Operator &op, const ClassifyOptions &options);

} // namespace celliptic
