#include "celliptic/operator.hpp"

#include "celliptic/error.hpp"

#include <algorithm>
#include <sstream>

namespace celliptic {

ValidationReport validate(const Operator &op) {
  ValidationReport report;
  auto &v = report.violations;
  if (op.n() < 2)
    v.emplace_back("dimension n must be at least 2");
  if (op.k() < 1)
    v.emplace_back("order k must be at least 1");
  if (op.dim_v() < 1 || op.dim_w() < 1)
    v.emplace_back("dim_v and dim_w must be positive");

  bool any_nonzero = false;
  for (const auto &[alpha, a] : op.terms()) {
    if (static_cast<int>(alpha.size()) != op.n()) {
      v.emplace_back("multi-index length differs from n");
      continue;
    }
    if (std::any_of(alpha.begin(), alpha.end(), [](int e) { return e < 0; }))
      v.emplace_back("negative exponent in multi-index");
    if (order(alpha) != op.k()) {
      std::ostringstream os;
      os << "non-homogeneous term of order " << order(alpha);
      v.push_back(os.str());
    }
    if (a.rows() != op.dim_w() || a.cols() != op.dim_v())
      v.emplace_back("coefficient matrix shape differs from dim_w x dim_v");
    else if (!a.allFinite())
      v.emplace_back("non-finite coefficient");
    else if (!a.isZero(0.0))
      any_nonzero = true;
  }
  if (!any_nonzero)
    v.emplace_back("zero operator");
  return report;
}

void Operator::require_valid() const {
  const auto report = validate(*this);
  if (!report.ok())
    throw InvariantError("invalid operator: " + report.violations.front());
}

Operator Operator::transformed(const Eigen::MatrixXd &m, const Eigen::MatrixXd &nmat) const {
  if (m.rows() != m.cols() || m.cols() != dim_w_ || nmat.rows() != nmat.cols() ||
      nmat.rows() != dim_v_)
    throw InvariantError("transform matrices do not match dim_w x dim_w and dim_v x dim_v");
  Terms t;
  for (const auto &[alpha, a] : terms_)
    t.emplace(alpha, m * a * nmat);
  return Operator(n_, k_, dim_v_, dim_w_, std::move(t));
}

SymbolValue symbol(const Operator &op, const Eigen::VectorXcd &xi) {
  op.require_valid();
  if (xi.size() != op.n())
    throw InvariantError("frequency has the wrong dimension");
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(op.dim_w(), op.dim_v());
  for (const auto &[alpha, a] : op.terms()) {
    std::complex<double> power(1.0, 0.0);
    for (int i = 0; i < op.n(); ++i)
      for (int e = 0; e < alpha[i]; ++e)
        power *= xi[i];
    s += power * a.cast<std::complex<double>>();
  }
  return {std::move(s), xi};
}

Eigen::MatrixXd real_symbol(const Operator &op, const Eigen::VectorXd &xi) {
  op.require_valid();
  if (xi.size() != op.n())
    throw InvariantError("frequency has the wrong dimension");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(op.dim_w(), op.dim_v());
  for (const auto &[alpha, a] : op.terms()) {
    double power = 1.0;
    for (int i = 0; i < op.n(); ++i)
      for (int e = 0; e < alpha[i]; ++e)
        power *= xi[i];
    s += power * a;
  }
  return s;
}

Polynomial apply_to_polynomial(const Operator &op, const Polynomial &q) {
  op.require_valid();
  if (q.n() != op.n() || q.dim() != op.dim_v())
    throw InvariantError("polynomial does not match the operator's domain");
  const int out_degree = q.degree_bound() - op.k();
  Polynomial out(op.n(), op.dim_w(), std::max(out_degree, 0));
  if (out_degree < 0)
    return out;
  const auto &monos = cached_monomials_up_to(op.n(), q.degree_bound());
  MultiIndex reduced(static_cast<std::size_t>(op.n()));
  for (std::size_t m = 0; m < monos.size(); ++m) {
    const Eigen::VectorXd c = q.coeffs().row(static_cast<Eigen::Index>(m)).transpose();
    if (c.isZero(0.0))
      continue;
    for (const auto &[alpha, a] : op.terms()) {
      const double ff = falling_factorial(monos[m], alpha);
      if (ff == 0.0)
        continue;
      for (int i = 0; i < op.n(); ++i)
        reduced[i] = monos[m][i] - alpha[i];
      out.coeffs().row(static_cast<Eigen::Index>(graded_lex_index(reduced))) +=
          ff * (a * c).transpose();
    }
  }
  return out;
}

} // namespace celliptic
