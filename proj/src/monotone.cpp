#include "mallows/monotone.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace mallows {

void PatienceLength::push(std::int64_t value) {
  auto it = increasing_ ? std::lower_bound(tops_.begin(), tops_.end(), value)
                        : std::lower_bound(tops_.begin(), tops_.end(), value, std::greater<>{});
  if (it == tops_.end()) {
    tops_.push_back(value);
  } else {
    *it = value;
  }
}

namespace {

template <typename Range>
std::size_t patience(const Range& values, bool increasing) {
  PatienceLength piles(increasing);
  for (const auto v : values) piles.push(v);
  return piles.length();
}

}  // namespace

std::size_t lis_length(const Permutation& p) { return patience(p.one_line(), true); }
std::size_t lis_length(std::span<const std::int64_t> values) { return patience(values, true); }
std::size_t lds_length(const Permutation& p) { return patience(p.one_line(), false); }
std::size_t lds_length(std::span<const std::int64_t> values) { return patience(values, false); }

std::vector<int> lis_witness(const Permutation& p) {
  const auto v = p.one_line();
  std::vector<int> top_values;
  std::vector<std::size_t> top_index;
  std::vector<std::ptrdiff_t> pred(v.size(), -1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto pile = static_cast<std::size_t>(std::lower_bound(top_values.begin(), top_values.end(), v[i]) -
                                               top_values.begin());
    if (pile > 0) pred[i] = static_cast<std::ptrdiff_t>(top_index[pile - 1]);
    if (pile == top_values.size()) {
      top_values.push_back(v[i]);
      top_index.push_back(i);
    } else {
      top_values[pile] = v[i];
      top_index[pile] = i;
    }
  }
  std::vector<int> out;
  if (top_index.empty()) return out;
  for (auto i = static_cast<std::ptrdiff_t>(top_index.back()); i >= 0; i = pred[i]) out.push_back(v[i]);
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t lis_bruteforce(const Permutation& p) {
  const auto n = p.size();
  if (n > 20) throw std::invalid_argument("lis_bruteforce: n must be <= 20");
  // best[i] = longest increasing subsequence ending at i
  std::vector<std::size_t> best(n, 1);
  std::size_t result = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (p(j + 1) < p(i + 1)) best[i] = std::max(best[i], best[j] + 1);
    }
    result = std::max(result, best[i]);
  }
  return result;
}

}  // namespace mallows
