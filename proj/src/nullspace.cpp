#include "celliptic/nullspace.hpp"

#include "celliptic/error.hpp"
#include "celliptic/quadrature.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>

namespace celliptic {

Eigen::MatrixXd assemble_operator_matrix(const Operator &op, int d) {
  op.require_valid();
  const int n = op.n();
  const auto &monos = cached_monomials_up_to(n, d);
  const auto rows = static_cast<Eigen::Index>(count_monomials_up_to(n, d - op.k())) * op.dim_w();
  const auto cols = static_cast<Eigen::Index>(monos.size()) * op.dim_v();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  MultiIndex reduced(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < monos.size(); ++b) {
    for (const auto &[alpha, a] : op.terms()) {
      const double ff = falling_factorial(monos[b], alpha);
      if (ff == 0.0)
        continue;
      for (int i = 0; i < n; ++i)
        reduced[i] = monos[b][i] - alpha[i];
      const auto row0 = static_cast<Eigen::Index>(graded_lex_index(reduced)) * op.dim_w();
      const auto col0 = static_cast<Eigen::Index>(b) * op.dim_v();
      m.block(row0, col0, op.dim_w(), op.dim_v()) += ff * a;
    }
  }
  return m;
}

std::vector<Polynomial> orthonormalize_on_unit_ball(const std::vector<Polynomial> &polys) {
  if (polys.empty())
    return {};
  const int n = polys.front().n();
  int degree = 0;
  for (const auto &p : polys)
    degree = std::max(degree, p.degree_bound());
  const Quadrature quad = region_quadrature(Region::ball(Eigen::VectorXd::Zero(n), 1.0), 2 * degree);

  // Thin QR of the weighted value matrix: column j holds sqrt(w) * p_j at
  // every node and component, so R^T R is the L^2 Gram matrix.
  const auto count = static_cast<Eigen::Index>(polys.size());
  const int dim = polys.front().dim();
  const Eigen::VectorXd sqrt_w = quad.weights.cwiseSqrt();
  Eigen::MatrixXd values(quad.size() * dim, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::MatrixXd v = sqrt_w.asDiagonal() * polys[static_cast<std::size_t>(j)].evaluate(quad.nodes);
    values.col(j) = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(values);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(count).triangularView<Eigen::Upper>();
  const Eigen::VectorXd diag = r.diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-12 * diag.maxCoeff()))
    throw NumericalError("Gram matrix of the polynomial family is numerically singular");
  const Eigen::MatrixXd transform =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(count, count));
  std::vector<Polynomial> out;
  out.reserve(polys.size());
  for (Eigen::Index j = 0; j < count; ++j) {
    Polynomial acc(n, polys.front().dim(), degree);
    for (Eigen::Index i = 0; i < count; ++i)
      acc += transform(i, j) * polys[static_cast<std::size_t>(i)];
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

// dim K_{d'} from the leading column block: graded ordering makes the
// degree <= d' coefficients a prefix of both rows and columns.
std::vector<int> dims_from_matrix(const Operator &op, const Eigen::MatrixXd &m, double sigma_max) {
  const double cutoff = kKernelCutoff * sigma_max;
  std::vector<int> dims;
  for (int dp = 0;; ++dp) {
    const auto c = static_cast<Eigen::Index>(count_monomials_up_to(op.n(), dp)) * op.dim_v();
    if (c > m.cols())
      break;
    const auto r = static_cast<Eigen::Index>(count_monomials_up_to(op.n(), dp - op.k())) * op.dim_w();
    Eigen::Index rank = 0;
    if (r > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.topLeftCorner(r, c));
      const auto &sv = svd.singularValues();
      while (rank < sv.size() && sv[rank] > cutoff)
        ++rank;
    }
    dims.push_back(static_cast<int>(c - rank));
  }
  return dims;
}

double largest_singular_value(const Eigen::MatrixXd &m) {
  if (m.rows() == 0 || m.cols() == 0)
    return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

} // namespace

std::vector<int> kernel_dims(const Operator &op, int d) {
  if (d < 0)
    throw InvariantError("polynomial degree must be nonnegative");
  const Eigen::MatrixXd m = assemble_operator_matrix(op, d);
  return dims_from_matrix(op, m, largest_singular_value(m));
}

NullspaceBasis kernel_basis(const Operator &op, int d) {
  if (d < 0)
    throw InvariantError("polynomial degree must be nonnegative");
  const Eigen::MatrixXd m = assemble_operator_matrix(op, d);
  const int n = op.n();
  const Eigen::Index cols = m.cols();

  NullspaceBasis result;
  result.degree_bound = d;

  Eigen::MatrixXd kernel;
  double sigma_max = 0.0;
  if (m.rows() == 0) {
    kernel = Eigen::MatrixXd::Identity(cols, cols);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    sigma_max = sv.size() > 0 ? sv[0] : 0.0;
    const double cutoff = kKernelCutoff * sigma_max;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff)
      ++rank;
    kernel = svd.matrixV().rightCols(cols - rank);
  }

  result.dims_by_degree = dims_from_matrix(op, m, sigma_max);

  std::vector<Polynomial> raw;
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    Eigen::MatrixXd coeffs = Eigen::Map<const Eigen::MatrixXd>(
                                 kernel.col(j).data(), op.dim_v(), cols / op.dim_v())
                                 .transpose();
    raw.emplace_back(n, op.dim_v(), d, std::move(coeffs));
  }
  result.basis = orthonormalize_on_unit_ball(raw);

  const int top = result.dims_by_degree.back();
  result.degree = d;
  while (result.degree > 0 && result.dims_by_degree[static_cast<std::size_t>(result.degree - 1)] == top)
    --result.degree;
  return result;
}

int stabilization_window(int d_max) { return (d_max + 1) / 2; }

StabilizedNullspace stabilized_nullspace(const Operator &op, int d_max) {
  op.require_valid();
  if (d_max < op.k() + 2)
    throw InvariantError("d_max must be at least k + 2");
  StabilizedNullspace out;
  out.basis = kernel_basis(op, d_max);
  const auto &dims = out.basis.dims_by_degree;
  const int window = stabilization_window(d_max);
  out.stabilized = true;
  for (int d = d_max - window; d < d_max; ++d)
    if (dims[static_cast<std::size_t>(d)] != dims[static_cast<std::size_t>(d + 1)])
      out.stabilized = false;
  return out;
}

} // namespace celliptic
