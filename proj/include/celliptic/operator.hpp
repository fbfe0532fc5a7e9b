#pragma once

#include "celliptic/multi_index.hpp"
#include "celliptic/polynomial.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace celliptic {

/// Homogeneous constant-coefficient operator  A u = sum_{|alpha|=k} A_alpha d^alpha u
/// from V = R^dim_v valued to W = R^dim_w valued functions on R^n.
///
/// The object may hold data that violates the invariants (so that validate()
/// can report on it); every computational entry point calls require_valid().
class Operator {
public:
  using Terms = std::map<MultiIndex, Eigen::MatrixXd>;

  Operator() = default;
  Operator(int n, int k, int dim_v, int dim_w, Terms terms)
      : n_(n), k_(k), dim_v_(dim_v), dim_w_(dim_w), terms_(std::move(terms)) {}

  int n() const { return n_; }
  int k() const { return k_; }
  int dim_v() const { return dim_v_; }
  int dim_w() const { return dim_w_; }
  const Terms &terms() const { return terms_; }

  /// Operator with terms M * A_alpha * N.
  Operator transformed(const Eigen::MatrixXd &m, const Eigen::MatrixXd &n) const;

  void require_valid() const;

private:
  int n_ = 0;
  int k_ = 0;
  int dim_v_ = 0;
  int dim_w_ = 0;
  Terms terms_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Operator &op);

struct SymbolValue {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd frequency;
};

/// sum_alpha xi^alpha A_alpha for complex xi.
SymbolValue symbol(const Operator &op, const Eigen::VectorXcd &xi);

/// Real symbol for real xi.
Eigen::MatrixXd real_symbol(const Operator &op, const Eigen::VectorXd &xi);

/// Exact symbolic application to a V-valued polynomial; the result has degree
/// bound deg(q) - k (the zero polynomial of degree 0 if deg(q) < k).
Polynomial apply_to_polynomial(const Operator &op, const Polynomial &q);

} // namespace celliptic
