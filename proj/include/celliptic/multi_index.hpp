#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace celliptic {

/// Exponent vector alpha in N_0^n.
using MultiIndex = std::vector<int>;

inline int order(const MultiIndex &alpha) {
  int s = 0;
  for (int a : alpha)
    s += a;
  return s;
}

std::uint64_t binomial(int n, int k);
double factorial(int n);

/// alpha! = prod alpha_i!
double multi_factorial(const MultiIndex &alpha);

/// Number of monomials in n variables of total degree exactly d.
std::size_t count_monomials_of_degree(int n, int d);

/// Number of monomials in n variables of total degree <= d.
std::size_t count_monomials_up_to(int n, int d);

// Graded lexicographic order: ascending total degree, and inside one degree
// lexicographically descending exponents, so for n = 2 the order reads
// 1, x, y, x^2, xy, y^2, x^3, ...

/// All multi-indices of degree exactly d, in graded-lex order.
std::vector<MultiIndex> monomials_of_degree(int n, int d);

/// All multi-indices of degree <= d, in graded-lex order.
std::vector<MultiIndex> monomials_up_to(int n, int d);

/// Shared, immutable copy of monomials_up_to(n, d).
const std::vector<MultiIndex> &cached_monomials_up_to(int n, int d);

/// Position of alpha in the graded-lex enumeration of monomials_up_to(n, .).
std::size_t graded_lex_index(const MultiIndex &alpha);

/// prod_i a_i (a_i - 1) ... (a_i - b_i + 1); zero when some b_i > a_i.
double falling_factorial(const MultiIndex &a, const MultiIndex &b);

} // namespace celliptic
