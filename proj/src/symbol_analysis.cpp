#include "celliptic/symbol_analysis.hpp"

#include "celliptic/error.hpp"
#include "celliptic/nullspace.hpp"
#include "celliptic/parallel.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace celliptic {

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr std::array<unsigned, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Halton point in [-1, 1]^dim.
Eigen::VectorXd halton(std::uint64_t index, int dim) {
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i)
    p[i] = 2.0 * radical_inverse(index, kPrimes[static_cast<std::size_t>(i) % kPrimes.size()]) - 1.0;
  return p;
}

// Pattern search on the unit sphere of R^dim: polls +-step along every
// coordinate, moves to the best improving poll, halves the step otherwise.
template <typename F>
std::pair<Eigen::VectorXd, double> sphere_pattern_search(F &&f, Eigen::VectorXd p, double step,
                                                         double min_step, int max_iter) {
  p.normalize();
  double best = f(p);
  for (int iter = 0; iter < max_iter && step > min_step && best > 0.0; ++iter) {
    Eigen::VectorXd best_p = p;
    double best_val = best;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd q = p;
        q[i] += sign * step;
        const double norm = q.norm();
        if (norm == 0.0)
          continue;
        q /= norm;
        const double val = f(q);
        if (val < best_val) {
          best_val = val;
          best_p = std::move(q);
        }
      }
    if (best_val < best) {
      best = best_val;
      p = std::move(best_p);
    } else {
      step *= 0.5;
    }
  }
  return {p, best};
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd &p) {
  const auto n = p.size() / 2;
  Eigen::VectorXcd xi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    xi[i] = {p[i], p[n + i]};
  return xi;
}

} // namespace

double smallest_singular_value(const Eigen::MatrixXcd &m) {
  if (m.rows() < m.cols())
    return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

double real_ellipticity_margin(const Operator &op, int grid_depth) {
  op.require_valid();
  if (grid_depth < 1)
    throw InvariantError("grid_depth must be at least 1");
  const int n = op.n();
  auto sigma = [&](const Eigen::VectorXd &xi) {
    return smallest_singular_value(real_symbol(op, xi).cast<std::complex<double>>());
  };

  std::vector<Eigen::VectorXd> samples;
  double spacing = 0.0;
  if (n == 2) {
    const int m = 256;
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * std::numbers::pi * j / m;
      samples.emplace_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    spacing = 2.0 * std::numbers::pi / m;
  } else {
    for (int i = 0; i < n; ++i)
      for (double s : {1.0, -1.0}) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[i] = s;
        samples.push_back(e);
      }
    const int m = 512 * n;
    for (int j = 1; j <= m; ++j) {
      Eigen::VectorXd p = halton(static_cast<std::uint64_t>(j), n);
      if (p.norm() > 1e-3)
        samples.push_back(p.normalized());
    }
    spacing = 2.0 * std::pow(static_cast<double>(m), -1.0 / (n - 1));
  }

  Eigen::VectorXd best_xi = samples.front();
  double best = std::numeric_limits<double>::infinity();
  for (const auto &xi : samples) {
    const double v = sigma(xi);
    if (v < best) {
      best = v;
      best_xi = xi;
    }
  }
  // Local refinement: one poll stencil per depth level with halving spacing.
  double step = spacing;
  for (int depth = 0; depth < grid_depth && best > 0.0; ++depth) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
          Eigen::VectorXd q = best_xi;
          q[i] += s * step;
          q.normalize();
          const double v = sigma(q);
          if (v < best) {
            best = v;
            best_xi = q;
            moved = true;
          }
        }
    }
    step *= 0.5;
  }
  return best;
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::c_elliptic_evidence:
    return "c_elliptic_evidence";
  case Verdict::not_c_elliptic:
    return "not_c_elliptic";
  case Verdict::inconclusive:
    return "inconclusive";
  }
  return "inconclusive";
}

SymbolSearchResult complex_symbol_search(const Operator &op, int restarts, std::uint64_t seed) {
  op.require_valid();
  if (restarts < 1)
    throw InvariantError("restarts must be positive");
  const int n = op.n();
  auto objective = [&](const Eigen::VectorXd &p) {
    return smallest_singular_value(symbol(op, to_complex(p)).matrix);
  };

  std::vector<std::pair<Eigen::VectorXd, double>> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Eigen::VectorXd start = halton(seed * static_cast<std::uint64_t>(restarts) + r + 1, 2 * n);
    if (start.norm() < 1e-6)
      start[0] = 1.0;
    results[r] = sphere_pattern_search(objective, start, 0.25, 1e-14, 20000);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].second < results[best].second)
      best = r;

  SymbolSearchResult out;
  out.minimum = results[best].second;
  out.xi = to_complex(results[best].first);
  const Eigen::MatrixXcd s = symbol(op, out.xi).matrix;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s, Eigen::ComputeFullV);
  out.v = svd.matrixV().col(s.cols() - 1);
  return out;
}

EllipticityReport c_ellipticity_classify(const Operator &op, const ClassifyOptions &options) {
  op.require_valid();
  if (options.d_max < op.k() + 2)
    throw InvariantError("d_max must be at least k + 2");
  if (!(options.tol > 0.0))
    throw InvariantError("tol must be positive");

  EllipticityReport report;
  report.real_margin = real_ellipticity_margin(op, options.grid_depth);

  const SymbolSearchResult search = complex_symbol_search(op, options.restarts, options.seed);
  report.symbol_minimum = search.minimum;
  if (search.minimum < options.tol) {
    report.symbol_violation = true;
    SymbolCertificate cert{search.xi, search.v, 0.0};
    // A[c xi] = c^k A[xi]: rotate the phase so the largest entry of xi is real positive.
    Eigen::Index j = 0;
    cert.xi.cwiseAbs().maxCoeff(&j);
    cert.xi *= std::conj(cert.xi(j)) / std::abs(cert.xi(j));
    cert.v.cwiseAbs().maxCoeff(&j);
    cert.v *= std::conj(cert.v(j)) / std::abs(cert.v(j));
    cert.residual = (symbol(op, cert.xi).matrix * cert.v).norm();
    report.certificate = std::move(cert);
  }

  report.nullspace_dims = kernel_dims(op, options.d_max);
  const auto &dims = report.nullspace_dims;
  const auto last = dims.size() - 1;
  report.nullspace_increasing = dims[last] > dims[last - 1];
  report.stabilization_window = stabilization_window(options.d_max);
  report.nullspace_stabilized = true;
  for (std::size_t d = last - static_cast<std::size_t>(report.stabilization_window); d < last; ++d)
    if (dims[d] != dims[d + 1])
      report.nullspace_stabilized = false;

  if (report.symbol_violation || report.nullspace_increasing)
    report.verdict = Verdict::not_c_elliptic;
  else if (report.nullspace_stabilized)
    report.verdict = Verdict::c_elliptic_evidence;
  else
    report.verdict = Verdict::inconclusive;
  return report;
}

} // namespace celliptic
