#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mallows/permutation.hpp"

namespace mallows::testing {

inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

inline std::uint64_t naive_inversions(const Permutation& p) {
  std::uint64_t c = 0;
  for (std::size_t i = 1; i <= p.size(); ++i)
    for (std::size_t j = i + 1; j <= p.size(); ++j) c += p(i) > p(j);
  return c;
}

// Places element i at the z_i-th unused position by a linear scan.
inline std::vector<std::int64_t> naive_positions(const std::vector<std::uint32_t>& z) {
  std::vector<bool> used;
  std::vector<std::int64_t> out;
  for (const auto zi : z) {
    std::uint32_t seen = 0;
    std::int64_t pos = 0;
    while (true) {
      ++pos;
      if (static_cast<std::size_t>(pos) >= used.size()) used.resize(pos + 1, false);
      if (!used[pos] && ++seen == zi) break;
    }
    used[pos] = true;
    out.push_back(pos);
  }
  return out;
}

// Longest increasing subsequence by exhaustive subset scan (n <= 12).
inline std::size_t subset_lis(const Permutation& p) {
  const auto n = p.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int last = 0;
    bool ok = true;
    std::size_t len = 0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (mask & (1u << i)) {
        ok = p(i + 1) > last;
        last = p(i + 1);
        ++len;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

// P(first return of the chain to 0 happens at step j), by enumerating every
// geometric path of length j; any z_i > j makes a return by time j impossible.
inline double enumerated_return_pmf(double q, std::uint32_t j) {
  std::vector<std::uint32_t> z(j, 1);
  double total = 0;
  while (true) {
    std::uint64_t m = 0;
    bool first_at_j = true;
    double w = 1;
    for (std::uint32_t t = 0; t < j; ++t) {
      m = std::max<std::uint64_t>(m, z[t]) - 1;
      w *= (1 - q) * std::pow(q, z[t] - 1.0);
      if (m == 0 && t + 1 < j) first_at_j = false;
    }
    if (first_at_j && m == 0) total += w;
    std::uint32_t k = 0;
    while (k < j && z[k] == j) z[k++] = 1;
    if (k == j) break;
    ++z[k];
  }
  return total;
}

}  // namespace mallows::testing
