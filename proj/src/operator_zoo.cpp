#include "celliptic/operator_zoo.hpp"

#include "celliptic/error.hpp"

#include <cmath>

namespace celliptic::zoo {

namespace {

MultiIndex unit(int n, int i, int power = 1) {
  MultiIndex e(static_cast<std::size_t>(n), 0);
  e[i] = power;
  return e;
}

void require_dimension(int n) {
  if (n < 2)
    throw InvariantError("zoo operators need n >= 2");
}

// Row of the symmetric-tensor coordinate (i, j), i <= j.
int sym_row(int n, int i, int j) {
  if (i == j)
    return i;
  int row = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++row)
      if (a == i && b == j)
        return row;
  return -1;
}

} // namespace

Operator gradient(int n) {
  require_dimension(n);
  Operator::Terms terms;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, 1);
    a(i, 0) = 1.0;
    terms.emplace(unit(n, i), a);
  }
  return Operator(n, 1, 1, n, std::move(terms));
}

Operator symmetric_gradient(int n) {
  require_dimension(n);
  const int dim_w = n * (n + 1) / 2;
  const double w = std::sqrt(2.0) / 2.0;
  Operator::Terms terms;
  for (int l = 0; l < n; ++l) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim_w, n);
    a(l, l) = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int row = sym_row(n, i, j);
        if (l == i)
          a(row, j) += w;
        if (l == j)
          a(row, i) += w;
      }
    terms.emplace(unit(n, l), a);
  }
  return Operator(n, 1, n, dim_w, std::move(terms));
}

Operator tracefree_symmetric_gradient(int n) {
  Operator sym = symmetric_gradient(n);
  Operator::Terms terms = sym.terms();
  for (int l = 0; l < n; ++l) {
    auto &a = terms.at(unit(n, l));
    for (int i = 0; i < n; ++i)
      a(i, l) -= 1.0 / n;
  }
  return Operator(n, 1, n, sym.dim_w(), std::move(terms));
}

Operator derivative(int n, int k) {
  require_dimension(n);
  if (k < 1)
    throw InvariantError("derivative order must be positive");
  int dim_w = 1;
  for (int t = 0; t < k; ++t)
    dim_w *= n;
  Operator::Terms terms;
  for (const auto &alpha : monomials_of_degree(n, k))
    terms.emplace(alpha, Eigen::MatrixXd::Zero(dim_w, 1));
  std::vector<int> tuple(static_cast<std::size_t>(k), 0);
  for (int row = 0; row < dim_w; ++row) {
    int rest = row;
    for (int t = k - 1; t >= 0; --t) {
      tuple[t] = rest % n;
      rest /= n;
    }
    MultiIndex alpha(static_cast<std::size_t>(n), 0);
    for (int i : tuple)
      ++alpha[i];
    terms.at(alpha)(row, 0) = 1.0;
  }
  return Operator(n, k, 1, dim_w, std::move(terms));
}

Operator hessian(int n) { return derivative(n, 2); }

Operator laplacian_scalar(int n) {
  require_dimension(n);
  Operator::Terms terms;
  for (int i = 0; i < n; ++i)
    terms.emplace(unit(n, i, 2), Eigen::MatrixXd::Ones(1, 1));
  return Operator(n, 2, 1, 1, std::move(terms));
}

Operator cauchy_riemann(int n) {
  if (n != 2)
    throw InvariantError("cauchy_riemann is only defined for n = 2");
  Operator::Terms terms;
  Eigen::MatrixXd dx(2, 2), dy(2, 2);
  dx << 1, 0, 0, 1;
  dy << 0, -1, 1, 0;
  terms.emplace(unit(2, 0), dx);
  terms.emplace(unit(2, 1), dy);
  return Operator(2, 1, 2, 2, std::move(terms));
}

Operator by_name(const std::string &name, int n, int k) {
  if (name == "gradient")
    return gradient(n);
  if (name == "symmetric_gradient")
    return symmetric_gradient(n);
  if (name == "tracefree_symmetric_gradient")
    return tracefree_symmetric_gradient(n);
  if (name == "hessian")
    return hessian(n);
  if (name == "derivative")
    return derivative(n, k);
  if (name == "laplacian_scalar")
    return laplacian_scalar(n);
  if (name == "cauchy_riemann")
    return cauchy_riemann(n);
  throw ParseError("unknown zoo operator '" + name + "'");
}

std::vector<std::string> names() {
  return {"gradient",         "symmetric_gradient", "tracefree_symmetric_gradient",
          "hessian",          "derivative",         "laplacian_scalar",
          "cauchy_riemann"};
}

} // namespace celliptic::zoo
