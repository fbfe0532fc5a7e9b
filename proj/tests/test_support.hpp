#pragma once

#include "celliptic/polynomial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace celliptic::testing {

inline std::mt19937_64 &rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = uniform();
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = uniform(lo, hi);
  return v;
}

inline Polynomial random_polynomial(int n, int dim, int degree) {
  Polynomial p(n, dim, degree);
  p.coeffs() = random_matrix(p.coeffs().rows(), dim);
  return p;
}

} // namespace celliptic::testing
