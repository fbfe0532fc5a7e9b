#include "celliptic/multi_index.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace celliptic {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i)
    r *= i;
  return r;
}

double multi_factorial(const MultiIndex &alpha) {
  double r = 1.0;
  for (int a : alpha)
    r *= factorial(a);
  return r;
}

std::size_t count_monomials_of_degree(int n, int d) {
  if (d < 0)
    return 0;
  return binomial(d + n - 1, n - 1);
}

std::size_t count_monomials_up_to(int n, int d) {
  if (d < 0)
    return 0;
  return binomial(d + n, n);
}

namespace {

void enumerate(int n, int pos, int remaining, MultiIndex &current,
               std::vector<MultiIndex> &out) {
  if (pos == n - 1) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[pos] = a;
    enumerate(n, pos + 1, remaining - a, current, out);
  }
}

} // namespace

std::vector<MultiIndex> monomials_of_degree(int n, int d) {
  std::vector<MultiIndex> out;
  if (d < 0 || n <= 0)
    return out;
  out.reserve(count_monomials_of_degree(n, d));
  MultiIndex current(static_cast<std::size_t>(n), 0);
  enumerate(n, 0, d, current, out);
  return out;
}

std::vector<MultiIndex> monomials_up_to(int n, int d) {
  std::vector<MultiIndex> out;
  out.reserve(count_monomials_up_to(n, d));
  for (int j = 0; j <= d; ++j) {
    auto level = monomials_of_degree(n, j);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

const std::vector<MultiIndex> &cached_monomials_up_to(int n, int d) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<MultiIndex>>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[{n, d}];
  if (!slot)
    slot = std::make_unique<std::vector<MultiIndex>>(monomials_up_to(n, d));
  return *slot;
}

std::size_t graded_lex_index(const MultiIndex &alpha) {
  const int n = static_cast<int>(alpha.size());
  const int d = order(alpha);
  std::size_t index = count_monomials_up_to(n, d - 1);
  int remaining = d;
  for (int i = 0; i + 1 < n; ++i) {
    const int parts = n - i - 1;
    for (int v = alpha[i] + 1; v <= remaining; ++v)
      index += count_monomials_of_degree(parts, remaining - v);
    remaining -= alpha[i];
  }
  return index;
}

double falling_factorial(const MultiIndex &a, const MultiIndex &b) {
  assert(a.size() == b.size());
  double r = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > a[i])
      return 0.0;
    for (int j = 0; j < b[i]; ++j)
      r *= a[i] - j;
  }
  return r;
}

} // namespace celliptic
